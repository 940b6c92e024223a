//! Grid verification runs, surface sampling and curve summaries behind the
//! `mlsurf` command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::baker_akhiezer::{ba_conjugation_defect, consistency_defect, f2_complex};
use crate::diffgeo::{
    analytic_gradients, christoffel_invariant_defects, christoffel_solve, connection_trace_defects,
    frame_and_connection, frame_defects, gauss_curvature, gauss_curvature_fd, gram_defects,
    lagrangian_angle, metric_from_jet, minimality_defects, residue_identity_defects,
    spectral_degeneracy_distance, JetMetric, MetricField, SpectralMetric,
};
use crate::rational_form::Component;
use crate::spectral_curve::{derive_constants, regularity_defect, ReducibleCurve};
use crate::surface::{ConeFamily, JetField, SpectralFamily};
use crate::{Error, Result, C64};

/// Radius of the excluded tube around lines where G vanishes.
pub const EXCLUSION_RADIUS: f64 = 1e-2;
/// G must be below this everywhere inside the excluded tube.
pub const TUBE_G_LIMIT: f64 = 1e-3;
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    Spectral {
        a: f64,
        b: f64,
        q1: f64,
        gamma_im: f64,
    },
    Cone {
        m: u32,
        n: u32,
    },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Spectral { .. } => "spectral",
            FamilySpec::Cone { .. } => "cone",
        }
    }

    pub fn parameters(&self) -> BTreeMap<String, f64> {
        let mut p = BTreeMap::new();
        match *self {
            FamilySpec::Spectral { a, b, q1, gamma_im } => {
                p.insert("a".into(), a);
                p.insert("b".into(), b);
                p.insert("q1".into(), q1);
                p.insert("gamma_im".into(), gamma_im);
            }
            FamilySpec::Cone { m, n } => {
                p.insert("m".into(), m as f64);
                p.insert("n".into(), n as f64);
            }
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl GridSpec {
    /// Half-open square [0, 2π)² with n×n points.
    pub fn periodic(nx: usize, ny: usize) -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        Self {
            nx,
            ny,
            x_range: (0.0, tau),
            y_range: (0.0, tau),
        }
    }

    /// Points in row-major order (y outer, x inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let dx = (self.x_range.1 - self.x_range.0) / self.nx as f64;
        let dy = (self.y_range.1 - self.y_range.0) / self.ny as f64;
        (0..self.ny)
            .flat_map(|j| {
                (0..self.nx).map(move |i| {
                    (
                        self.x_range.0 + i as f64 * dx,
                        self.y_range.0 + j as f64 * dy,
                    )
                })
            })
            .collect()
    }
}

/// Parses `NXxNY`, e.g. `64x64`.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Parse(format!("grid '{s}' must look like 64x64")))?;
    let nx: usize = a
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid width '{a}'")))?;
    let ny: usize = b
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid height '{b}'")))?;
    if nx == 0 || ny == 0 {
        return Err(Error::Parse("grid dimensions must be positive".into()));
    }
    Ok((nx, ny))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TolProfile {
    /// Curvature from closed-form metric derivatives.
    Strict,
    /// Curvature by nested finite differences of the metric.
    Fd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub grid: GridSpec,
    pub profile: TolProfile,
    pub h: f64,
    pub exclusion_radius: f64,
}

impl VerifyOptions {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            grid,
            profile: TolProfile::Strict,
            h: DEFAULT_STEP,
            exclusion_radius: EXCLUSION_RADIUS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub excluded: usize,
    pub evaluated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub parameters: BTreeMap<String, f64>,
    pub grid: GridSpec,
    pub profile: TolProfile,
    pub h: f64,
    pub exclusion_radius: f64,
    /// Lagrangian angle at the first non-excluded grid point.
    pub beta_reference: Option<f64>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(
            s,
            "family {} ({}) grid {}x{} profile {:?} h={:e}",
            self.family,
            params.join(", "),
            self.grid.nx,
            self.grid.ny,
            self.profile,
            self.h
        );
        if let Some(b) = self.beta_reference {
            let _ = writeln!(s, "lagrangian angle beta = {b:.15}");
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<4} {:<28} max {:<12.3e} tol {:<8.1e} excluded {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.max_defect,
                c.tolerance,
                c.excluded
            );
        }
        let _ = writeln!(s, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

/// Per-point outcome: `None` for excluded points, `+inf` on evaluation errors.
type PointValues = Vec<Option<f64>>;

struct CheckDef {
    name: &'static str,
    tol: f64,
}

fn err_inf<T>(r: Result<T>, f: impl FnOnce(T) -> f64) -> f64 {
    r.map(f).unwrap_or(f64::INFINITY)
}

fn fmax(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| {
        if x.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(x)
        }
    })
}

/// Checks shared by both families, evaluated at a non-excluded point.
fn local_checks<F: JetField<f64>>(
    field: &F,
    x: f64,
    y: f64,
    opts: &VerifyOptions,
) -> (Vec<f64>, Option<f64>) {
    let jet = field.jet(x, y);
    let beta = lagrangian_angle(&jet).ok();
    let ch = christoffel_solve(&jet);
    let metric = metric_from_jet(&jet);
    let grads = analytic_gradients(&jet);
    let christ_res = err_inf(ch.clone(), |c| c.residual);
    let christ_b = match (&ch, &metric) {
        (Ok(c), Ok(m)) => fmax(christoffel_invariant_defects(c, m)),
        _ => f64::INFINITY,
    };
    let trace = match (&ch, &grads) {
        (Ok(c), Ok(g)) => fmax(connection_trace_defects(c, g)),
        _ => f64::INFINITY,
    };
    let minimal = err_inf(ch, |c| fmax(minimality_defects(&c)));
    let (frame, recon) =
        match frame_and_connection(field, x, y, opts.h).and_then(|fd| frame_defects(&fd, &jet)) {
            Ok(d) => {
                let r = d.reconstruction;
                let mut structural = d;
                structural.reconstruction = 0.0;
                (structural.max(), r)
            }
            Err(_) => (f64::INFINITY, f64::INFINITY),
        };
    (
        vec![christ_res, christ_b, trace, minimal, frame, recon],
        beta,
    )
}

const LOCAL_NAMES: [&str; 6] = [
    "christoffel_residual",
    "christoffel_b_coefficients",
    "connection_trace",
    "minimality_imaginary_parts",
    "frame_structure",
    "frame_reconstruction",
];

const LOCAL_TOLS: [f64; 6] = [1e-10, 1e-8, 1e-8, 1e-8, 1e-6, 1e-5];

fn finish(
    spec: &FamilySpec,
    opts: &VerifyOptions,
    defs: Vec<CheckDef>,
    rows: Vec<(PointValues, Option<f64>)>,
    beta_idx: usize,
    extra: Vec<CheckRecord>,
) -> VerificationReport {
    let mut records: Vec<CheckRecord> = defs
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let vals: Vec<Option<f64>> = rows.iter().map(|(v, _)| v[k]).collect();
            let excluded = vals.iter().filter(|v| v.is_none()).count();
            let max = fmax(vals.iter().flatten().copied());
            CheckRecord {
                name: d.name.to_string(),
                max_defect: max,
                tolerance: d.tol,
                pass: max <= d.tol,
                excluded,
                evaluated: vals.len() - excluded,
            }
        })
        .collect();

    // β flips by π where f₂ changes sign, so compare e^{2iβ}:
    // |e^{2iβ} − e^{2iβ₀}| = 2|sin(β − β₀)|
    let betas: Vec<Option<f64>> = rows.iter().map(|(_, b)| *b).collect();
    let reference = betas.iter().flatten().next().copied();
    let excluded = rows.iter().filter(|(v, _)| v[beta_idx].is_none()).count();
    let evaluated = rows.len() - excluded;
    let spread = match reference {
        Some(r) => fmax(
            rows.iter()
                .filter(|(v, _)| v[beta_idx].is_some())
                .map(|(_, b)| b.map_or(f64::INFINITY, |b| 2.0 * (b - r).sin().abs())),
        ),
        None => f64::INFINITY,
    };
    records.insert(
        beta_idx,
        CheckRecord {
            name: "beta_constancy".into(),
            max_defect: spread,
            tolerance: 1e-8,
            pass: spread <= 1e-8,
            excluded,
            evaluated,
        },
    );
    records.extend(extra);
    let pass = records.iter().all(|r| r.pass);
    VerificationReport {
        family: spec.name().into(),
        parameters: spec.parameters(),
        grid: opts.grid,
        profile: opts.profile,
        h: opts.h,
        exclusion_radius: opts.exclusion_radius,
        beta_reference: reference,
        checks: records,
        pass,
    }
}

fn scalar_record(name: &str, value: f64, tol: f64) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        max_defect: value,
        tolerance: tol,
        pass: value <= tol,
        excluded: 0,
        evaluated: 1,
    }
}

fn verify_spectral(
    spec: &FamilySpec,
    curve: &ReducibleCurve<f64>,
    opts: &VerifyOptions,
) -> VerificationReport {
    let fam = SpectralFamily::new(curve);
    let metric = SpectralMetric::new(curve);
    let curvature_tol = match opts.profile {
        TolProfile::Strict => 1e-4,
        TolProfile::Fd => 1e-3,
    };
    let defs = vec![
        CheckDef {
            name: "gram_norm",
            tol: 1e-10,
        },
        CheckDef {
            name: "gram_orthogonality",
            tol: 1e-10,
        },
        CheckDef {
            name: "metric_closed_form",
            tol: 1e-10,
        },
        CheckDef {
            name: "residue_identities",
            tol: 1e-9,
        },
        CheckDef {
            name: "ba_gluing_consistency",
            tol: 1e-12,
        },
        CheckDef {
            name: "ba_conjugation",
            tol: 1e-12,
        },
        CheckDef {
            name: "f2_reality",
            tol: 1e-12,
        },
        // index 7 is beta_constancy (inserted by `finish`)
        CheckDef {
            name: LOCAL_NAMES[0],
            tol: LOCAL_TOLS[0],
        },
        CheckDef {
            name: LOCAL_NAMES[1],
            tol: LOCAL_TOLS[1],
        },
        CheckDef {
            name: LOCAL_NAMES[2],
            tol: LOCAL_TOLS[2],
        },
        CheckDef {
            name: LOCAL_NAMES[3],
            tol: LOCAL_TOLS[3],
        },
        CheckDef {
            name: LOCAL_NAMES[4],
            tol: LOCAL_TOLS[4],
        },
        CheckDef {
            name: LOCAL_NAMES[5],
            tol: LOCAL_TOLS[5],
        },
        CheckDef {
            name: "gauss_curvature",
            tol: curvature_tol,
        },
        CheckDef {
            name: "e2ibeta_plus_one",
            tol: 1e-10,
        },
        CheckDef {
            name: "degeneracy_tube",
            tol: TUBE_G_LIMIT,
        },
    ];
    let probe_first = [C64::new(0.4, 0.3), C64::new(-1.1, 0.7)];
    let probe_second = [
        C64::new(0.0, 0.7),
        C64::new(0.5, -0.3),
        C64::new(curve.q[0], 0.0),
    ];
    let rows: Vec<(PointValues, Option<f64>)> = opts
        .grid
        .points()
        .par_iter()
        .map(|&(x, y)| {
            let jet = fam.jet(x, y);
            let g = gram_defects(&jet);
            let (e_cf, g_cf) = metric.metric(x, y);
            let metric_dev = err_inf(metric_from_jet(&jet), |m| {
                ((m.e - e_cf).abs() / (1.0 + e_cf)).max((m.g - g_cf).abs() / (1.0 + g_cf))
            });
            let residues = err_inf(residue_identity_defects(curve, &jet), fmax);
            let glue = err_inf(consistency_defect(curve, x, y), |v| v);
            let conj = fmax(
                probe_first
                    .iter()
                    .map(|&p| {
                        err_inf(
                            ba_conjugation_defect(curve, x, y, Component::First, p),
                            |v| v,
                        )
                    })
                    .chain(probe_second.iter().map(|&p| {
                        err_inf(
                            ba_conjugation_defect(curve, x, y, Component::Second, p),
                            |v| v,
                        )
                    })),
            );
            let f2_im = f2_complex(curve, x, y).im.abs();
            let mut v: PointValues = vec![
                Some(g[0]),
                Some(fmax([g[1], g[2], g[3]])),
                Some(metric_dev),
                Some(residues),
                Some(glue),
                Some(conj),
                Some(f2_im),
            ];
            let excluded = spectral_degeneracy_distance(curve, x, y) < opts.exclusion_radius;
            if excluded {
                v.extend(std::iter::repeat(None).take(LOCAL_NAMES.len() + 2));
                v.push(Some(g_cf));
                (v, None)
            } else {
                let (local, beta) = local_checks(&fam, x, y, opts);
                v.extend(local.into_iter().map(Some));
                let k = match opts.profile {
                    TolProfile::Strict => metric
                        .metric_jet(x, y)
                        .ok_or(Error::Degenerate("no closed-form metric".into()))
                        .and_then(|m| gauss_curvature(&m)),
                    TolProfile::Fd => gauss_curvature_fd(&JetMetric(&fam), x, y, opts.h),
                };
                v.push(Some(err_inf(k, |k| (k - 1.0).abs())));
                v.push(Some(beta.map_or(f64::INFINITY, |b| {
                    (C64::new(0.0, 2.0 * b).exp() + 1.0).norm()
                })));
                v.push(None);
                (v, beta)
            }
        })
        .collect();

    let mut extra = vec![scalar_record("regularity", regularity_defect(curve), 1e-13)];
    match curve.relative_w2_coefficients() {
        Ok([p1, p2]) => {
            extra.push(scalar_record("w2_coefficient_p1", p1, 1e-12));
            extra.push(scalar_record("w2_coefficient_p2", p2, 1e-12));
        }
        Err(_) => extra.push(scalar_record("w2_coefficients", f64::INFINITY, 1e-12)),
    }
    let mut report = finish(spec, opts, defs, rows, 7, extra);
    // the tube check only has samples at excluded points; it is vacuous otherwise
    if let Some(t) = report
        .checks
        .iter_mut()
        .find(|c| c.name == "degeneracy_tube")
    {
        let inside = t.evaluated;
        t.excluded = 0;
        t.evaluated = inside;
    }
    report
}

fn verify_cone(
    spec: &FamilySpec,
    cone: &ConeFamily<f64>,
    opts: &VerifyOptions,
) -> VerificationReport {
    let defs = vec![
        CheckDef {
            name: "gram_norm",
            tol: 1e-10,
        },
        CheckDef {
            name: "gram_orthogonality",
            tol: 1e-10,
        },
        CheckDef {
            name: LOCAL_NAMES[0],
            tol: LOCAL_TOLS[0],
        },
        CheckDef {
            name: LOCAL_NAMES[1],
            tol: LOCAL_TOLS[1],
        },
        CheckDef {
            name: LOCAL_NAMES[2],
            tol: LOCAL_TOLS[2],
        },
        CheckDef {
            name: LOCAL_NAMES[3],
            tol: LOCAL_TOLS[3],
        },
        CheckDef {
            name: LOCAL_NAMES[4],
            tol: LOCAL_TOLS[4],
        },
        CheckDef {
            name: LOCAL_NAMES[5],
            tol: LOCAL_TOLS[5],
        },
    ];
    let rows: Vec<(PointValues, Option<f64>)> = opts
        .grid
        .points()
        .par_iter()
        .map(|&(x, y)| {
            let jet = cone.jet(x, y);
            let g = gram_defects(&jet);
            let mut v: PointValues = vec![Some(g[0]), Some(fmax([g[1], g[2], g[3]]))];
            let (local, beta) = local_checks(cone, x, y, opts);
            v.extend(local.into_iter().map(Some));
            (v, beta)
        })
        .collect();
    finish(spec, opts, defs, rows, 2, Vec::new())
}

/// Runs every applicable check over the grid.
pub fn run_verification(spec: &FamilySpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    match *spec {
        FamilySpec::Spectral { a, b, q1, gamma_im } => {
            let curve = derive_constants(a, b, q1, gamma_im)?;
            Ok(verify_spectral(spec, &curve, opts))
        }
        FamilySpec::Cone { m, n } => {
            let cone = ConeFamily::new(m, n)?;
            Ok(verify_cone(spec, &cone, opts))
        }
    }
}

/// Runs `f` on a rayon pool capped at `threads` workers (`None` = default pool).
pub fn with_thread_cap<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads.filter(|&n| n > 0) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

pub const CSV_HEADER: &str = "x,y,re_phi1,im_phi1,re_phi2,im_phi2,re_phi3,im_phi3,E,G,beta,K";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRow {
    pub x: f64,
    pub y: f64,
    pub phi: [C64; 3],
    pub e: f64,
    pub g: f64,
    pub beta: Option<f64>,
    /// Empty at excluded degenerate points.
    pub k: Option<f64>,
}

fn sample_with<F: JetField<f64>>(
    field: &F,
    grid: &GridSpec,
    excluded: impl Fn(f64, f64) -> bool + Sync,
    curvature: impl Fn(f64, f64) -> Result<f64> + Sync,
) -> Vec<SampleRow> {
    grid.points()
        .par_iter()
        .map(|&(x, y)| {
            let jet = field.jet(x, y);
            let e = crate::linalg::norm_sqr(&jet.phi_x);
            let g = crate::linalg::norm_sqr(&jet.phi_y);
            let skip = excluded(x, y);
            SampleRow {
                x,
                y,
                phi: jet.phi,
                e,
                g,
                beta: if skip {
                    None
                } else {
                    lagrangian_angle(&jet).ok()
                },
                k: if skip { None } else { curvature(x, y).ok() },
            }
        })
        .collect()
}

/// Samples φ, the metric, β and K on the grid.
pub fn sample_surface(spec: &FamilySpec, opts: &VerifyOptions) -> Result<Vec<SampleRow>> {
    match *spec {
        FamilySpec::Spectral { a, b, q1, gamma_im } => {
            let curve = derive_constants(a, b, q1, gamma_im)?;
            let fam = SpectralFamily::new(&curve);
            let metric = SpectralMetric::new(&curve);
            let radius = opts.exclusion_radius;
            let profile = opts.profile;
            let h = opts.h;
            Ok(sample_with(
                &fam,
                &opts.grid,
                |x, y| spectral_degeneracy_distance(&curve, x, y) < radius,
                |x, y| match profile {
                    TolProfile::Strict => gauss_curvature(&metric.metric_jet(x, y).unwrap()),
                    TolProfile::Fd => gauss_curvature_fd(&metric, x, y, h),
                },
            ))
        }
        FamilySpec::Cone { m, n } => {
            let cone = ConeFamily::new(m, n)?;
            let h = opts.h;
            Ok(sample_with(
                &cone,
                &opts.grid,
                |_, _| false,
                |x, y| gauss_curvature_fd(&JetMetric(&cone), x, y, h),
            ))
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes rows in the CSV format of [`CSV_HEADER`], 17 significant digits.
pub fn write_csv(rows: &[SampleRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        let mut line = vec![num(r.x), num(r.y)];
        for z in r.phi {
            line.push(num(z.re));
            line.push(num(z.im));
        }
        line.push(num(r.e));
        line.push(num(r.g));
        line.push(r.beta.map(num).unwrap_or_default());
        line.push(r.k.map(num).unwrap_or_default());
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Human-readable dump of every derived constant of the curve.
pub fn curve_info(a: f64, b: f64, q1: f64, gamma_im: f64) -> Result<String> {
    let k = derive_constants(a, b, q1, gamma_im)?;
    let p2 = k.expansion_at(Component::Second, 2)?;
    let p1 = k.expansion_at(Component::First, 2)?;
    let (reg_plus, reg_minus) = {
        let r1 = k.omega1.residue_simple(&k.a)? + k.omega2.residue_simple(&k.b)?;
        let r2 = k.omega1.residue_simple(&-k.a)? + k.omega2.residue_simple(&-k.b)?;
        (r1.abs(), r2.abs())
    };
    let mut s = String::new();
    let mut line = |name: &str, v: f64| {
        let _ = writeln!(s, "{name:<22} = {v}");
    };
    line("a", k.a);
    line("b", k.b);
    line("gamma_im", k.gamma_im);
    line("Q1", k.q[0]);
    line("Q2", k.q[1]);
    line("Q3", k.q[2]);
    line("c", k.c);
    line("d", k.d);
    line("alpha1", k.alpha[0]);
    line("alpha2", k.alpha[1]);
    line("alpha3", k.alpha[2]);
    line("Res_Q1", k.res_q[0]);
    line("Res_Q2", k.res_q[1]);
    line("Res_Q3", k.res_q[2]);
    line("Res_r", k.res_r);
    line("c1_exp", k.c1_exp);
    line("c2_exp", k.c2_exp);
    line("w2_coeff_P1", p1[1]);
    line("w2_coeff_P2", p2[1]);
    line("regularity_defect_+", reg_plus);
    line("regularity_defect_-", reg_minus);
    Ok(s)
}
