//! Acceptance gates. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::Instant;

use photonmodes::coupling::{
    compute_h, compute_h_polarized, compute_htilde, fit_decay_exponent, geometric_radii,
    linear_radii, oracle_direct_3d, radial_transform, sample_profile, CutoffSpec, Integrand3d,
    ProfileKind, Taper,
};
use photonmodes::fock::{
    ccr_frame_check, ccr_transform_check, heisenberg_scalar_evolution, scalar_mode_evolution,
    spectrum_equivalence_check, ModeLattice,
};
use photonmodes::polarization::{cross_coupling, transverse_projector, verify_completeness};
use photonmodes::thermo::{
    finite_box_density, planck_integral_density, subtraction_identity_check, DEFAULT_MODE_GUARD,
};
use photonmodes::{Mat3, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn smooth() -> CutoffSpec {
    CutoffSpec::smooth(1.0).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

fn c1_smooth_decay() -> Verdict {
    let t = Instant::now();
    let p = sample_profile(&smooth(), ProfileKind::H, &geometric_radii(50.0, 500.0, 60)).unwrap();
    let fit = fit_decay_exponent(&p, (50.0, 500.0), false).unwrap();
    let secs = t.elapsed().as_secs_f64();
    verdict(
        (fit.exponent + 2.5).abs() <= 0.05 && secs < 30.0,
        format!(
            "exponent {:.4} (target -2.5 ± 0.05), {secs:.2} s",
            fit.exponent
        ),
    )
}

fn c2_sharp_decay() -> Verdict {
    let p = sample_profile(
        &CutoffSpec::sharp(1.0).unwrap(),
        ProfileKind::H,
        &linear_radii(50.0, 500.0, 3000),
    )
    .unwrap();
    let fit = fit_decay_exponent(&p, (50.0, 500.0), true).unwrap();
    let changes = p.sign_changes();
    verdict(
        (fit.exponent + 2.0).abs() <= 0.1 && changes >= 100,
        format!(
            "envelope exponent {:.4} (target -2.0 ± 0.1) over {} peaks, {changes} sign changes",
            fit.exponent, fit.points_used
        ),
    )
}

fn c3_htilde_decay() -> Verdict {
    let radii = geometric_radii(50.0, 500.0, 60);
    let ht = fit_decay_exponent(
        &sample_profile(&smooth(), ProfileKind::Htilde, &radii).unwrap(),
        (50.0, 500.0),
        false,
    )
    .unwrap();
    let g = fit_decay_exponent(
        &sample_profile(&smooth(), ProfileKind::HtildeGrad, &radii).unwrap(),
        (50.0, 500.0),
        false,
    )
    .unwrap();
    verdict(
        (ht.exponent + 1.5).abs() <= 0.05 && (g.exponent + 2.5).abs() <= 0.1,
        format!(
            "htilde exponent {:.4} (-1.5 ± 0.05), gradient exponent {:.4} (-2.5 ± 0.1)",
            ht.exponent, g.exponent
        ),
    )
}

fn c4_asymptotic_constants() -> Verdict {
    let a = (PI / 2.0).sqrt();
    let b = (2.0 * PI).sqrt();
    let mut worst_h: f64 = 0.0;
    let mut worst_ht: f64 = 0.0;
    for r in geometric_radii(100.0, 500.0, 41) {
        worst_h = worst_h.max((compute_h(&smooth(), r).unwrap() * r.powf(2.5) / a - 1.0).abs());
        worst_ht =
            worst_ht.max((compute_htilde(&smooth(), r).unwrap() * r.powf(1.5) / b - 1.0).abs());
    }
    verdict(
        worst_h < 0.02 && worst_ht < 0.02,
        format!("max relative gap: r^2.5 h {worst_h:.4}, r^1.5 htilde {worst_ht:.4} (limit 0.02)"),
    )
}

fn c5_oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let points: Vec<Vec3> = (0..20)
        .map(|_| random_unit(&mut rng) * rng.gen_range(0.1..=5.0))
        .collect();
    let mut worst: f64 = 0.0;
    for taper in Taper::ALL {
        let spec = CutoffSpec::new(1.0, taper, 0.5).unwrap();
        for (alpha, integrand) in [
            (0.5, Integrand3d::InverseSqrt),
            (1.5, Integrand3d::InverseThreeHalves),
        ] {
            for y in &points {
                let reduced = radial_transform(&spec, alpha, y.norm()).unwrap();
                let direct = oracle_direct_3d(&spec, integrand, y, 1e-10).unwrap();
                worst = worst.max((direct.re - reduced).abs()).max(direct.im.abs());
            }
        }
    }
    verdict(
        worst < 1e-6,
        format!("max |reduced - direct| = {worst:e} over 120 cases (limit 1e-6)"),
    )
}

fn c6_projector_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_c: f64 = 0.0;
    let mut worst_n: f64 = 0.0;
    for i in 0..100_000 {
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let mut k = random_unit(&mut rng) * scale;
        if i % 100 == 0 {
            k = Vec3::new(0.0, 0.0, if i % 200 == 0 { scale } else { -scale });
        }
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let fallback = Vec3::new(phi.cos(), phi.sin(), 0.0);
        worst_c = worst_c.max(verify_completeness(&k, &fallback).unwrap());
        let v = random_unit(&mut rng) * rng.gen_range(0.0..10.0);
        let p = transverse_projector(&k).unwrap();
        let gap = (cross_coupling(&k, &v).unwrap().norm() - p.apply(&v).norm()).abs();
        worst_n = worst_n.max(gap);
    }
    verdict(
        worst_c < 1e-12 && worst_n < 1e-12,
        format!("completeness {worst_c:e}, norm identity {worst_n:e} over 1e5 samples each (limit 1e-12)"),
    )
}

fn multisets(
    values: &[u64],
    max_len: usize,
    start: usize,
    cur: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    if cur.len() == max_len {
        return;
    }
    for i in start..values.len() {
        cur.push(values[i]);
        multisets(values, max_len, i, cur, out);
        cur.pop();
    }
}

fn c7_spectral_equivalence() -> Verdict {
    // Spectra depend on the modes only through |n|², so every multiset of
    // at most six |n|² values from the N = 2 box covers all such lattices.
    let t = Instant::now();
    let mut groups: BTreeMap<u64, Vec<[i64; 3]>> = BTreeMap::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                let m = (a * a + b * b + c * c) as u64;
                if m > 0 {
                    groups.entry(m).or_default().push([a, b, c]);
                }
            }
        }
    }
    let values: Vec<u64> = groups.keys().copied().collect();
    let mut sets = Vec::new();
    multisets(&values, 6, 0, &mut Vec::new(), &mut sets);
    let mut checks = 0;
    let mut failure = None;
    for set in &sets {
        let mut used: BTreeMap<u64, usize> = BTreeMap::new();
        let indices: Vec<[i64; 3]> = set
            .iter()
            .map(|m| {
                let u = used.entry(*m).or_default();
                *u += 1;
                groups[m][*u - 1]
            })
            .collect();
        let lattice = ModeLattice::from_indices(2.0 * PI, &indices).unwrap();
        for cap in 0..=4 {
            let r = spectrum_equivalence_check(&lattice, cap.max(1), Some(cap)).unwrap();
            checks += 1;
            if !r.equal && failure.is_none() {
                failure = Some(format!("{set:?} cap {cap}: {:?}", r.first_discrepancy));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    match failure {
        None => verdict(
            secs < 60.0,
            format!(
                "{} lattices x caps 0..4 = {checks} exact comparisons, {secs:.1} s",
                sets.len()
            ),
        ),
        Some(f) => verdict(false, f),
    }
}

fn random_orthonormal(rng: &mut ChaCha8Rng) -> Mat3 {
    let a = random_unit(rng);
    let mut b = random_unit(rng);
    b -= a * a.dot(&b);
    let b = b.normalize();
    let c = a.cross(&b);
    Mat3::from_rows(&[a.transpose(), b.transpose(), c.transpose()])
}

fn c8_ccr() -> Verdict {
    let mut worst: f64 = 0.0;
    for k in [
        Vec3::x(),
        Vec3::new(0.3, -1.2, 0.5),
        Vec3::z(),
        Vec3::new(0.0, 0.0, -2.0),
    ] {
        worst = worst.max(ccr_transform_check(&k, 3).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        worst = worst.max(ccr_frame_check(&random_orthonormal(&mut rng), 3).unwrap());
    }
    let skew = Mat3::new(1.0, 0.5, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
    let control = ccr_frame_check(&skew, 3).unwrap();
    verdict(
        worst < 1e-12 && control > 0.1,
        format!("max deviation {worst:e} over 104 frames; non-orthogonal control {control:.3}"),
    )
}

fn c9_scalar_evolution() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut signs = Vec::new();
    for t in [0.1, 1.0, PI, 10.0] {
        for r in [
            heisenberg_scalar_evolution(1.7, t, 6).unwrap(),
            scalar_mode_evolution(&Vec3::new(0.4, -0.3, 1.1), t, 6).unwrap(),
        ] {
            worst = worst.max(r.deviation);
            if !signs.contains(&r.sign) {
                signs.push(r.sign);
            }
        }
    }
    verdict(
        worst < 1e-12 && signs.len() == 1,
        format!(
            "max deviation {worst:e}; empirical phase a(t) = a e^({}i w t) for U = exp(iHt)",
            if signs[0] < 0 { "-" } else { "+" }
        ),
    )
}

fn c10_planck() -> Verdict {
    let d1 = planck_integral_density(1.0).unwrap();
    let closed = -PI * PI / 90.0;
    let unit_gap = (d1 - closed).abs();
    let scaling = [0.5, 2.0, 4.0]
        .iter()
        .map(|&th| (planck_integral_density(th).unwrap() / (th * th * th * d1) - 1.0).abs())
        .fold(0.0f64, f64::max);
    let mut box_gap: f64 = 0.0;
    for (l, th) in [(16.0 * PI, 1.0), (8.0 * PI, 2.0), (24.0 * PI, 1.0)] {
        let d = planck_integral_density(th).unwrap();
        box_gap =
            box_gap.max(((finite_box_density(l, th, DEFAULT_MODE_GUARD).unwrap() - d) / d).abs());
    }
    let sub = subtraction_identity_check(16.0 * PI, 1.0, DEFAULT_MODE_GUARD)
        .unwrap()
        .rel_deviation;
    verdict(
        unit_gap < 1e-8 && scaling < 1e-10 && box_gap < 0.01 && sub < 1e-12,
        format!("|d(1)+pi^2/90| {unit_gap:e}, scaling {scaling:e}, box gap {box_gap:.2e}, subtraction {sub:e}"),
    )
}

fn c11_structural_zeros() -> Vec<(String, Verdict)> {
    let spec = smooth();
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for y in [
        Vec3::new(1.0, 2.0, 3.0),
        Vec3::new(-4.0, 0.5, 0.0),
        Vec3::new(0.0, 0.0, 7.0),
    ] {
        worst = worst.max(compute_h_polarized(&spec, 1, 3, &y).unwrap().value.norm());
    }
    out.push((
        "11a".into(),
        verdict(worst < 1e-8, format!("max |h^3_1| = {worst:e}")),
    ));

    // Literal reading: every component of both polarizations, on the axis.
    let mut worst_other: f64 = 0.0;
    let mut worst_32: f64 = 0.0;
    for y3 in [0.5, 3.0, 12.0] {
        let y = Vec3::new(0.0, 0.0, y3);
        for lambda in 1..=2 {
            for comp in 1..=3 {
                let v = compute_h_polarized(&spec, lambda, comp, &y)
                    .unwrap()
                    .value
                    .norm();
                if (lambda, comp) == (2, 3) {
                    worst_32 = worst_32.max(v);
                } else {
                    worst_other = worst_other.max(v);
                }
            }
        }
    }
    out.push((
        "11b".into(),
        verdict(
            worst_other.max(worst_32) < 1e-8,
            format!(
                "on-axis max |h^i_lambda| excluding h^3_2 = {worst_other:e}, max |h^3_2| = {worst_32:e} (limit 1e-8)"
            ),
        ),
    ));

    let r = 20.0;
    let a = Vec3::new(1.0, 1.0, 0.0).normalize() * r;
    let b = Vec3::new(1.0, 1.0, 2f64.sqrt()).normalize() * r;
    let integrand = Integrand3d::Polarized {
        lambda_index: 1,
        component: 1,
    };
    let ha = compute_h_polarized(&spec, 1, 1, &a).unwrap().value;
    let hb = compute_h_polarized(&spec, 1, 1, &b).unwrap().value;
    let oa = oracle_direct_3d(&spec, integrand, &a, 1e-12).unwrap();
    let ob = oracle_direct_3d(&spec, integrand, &b, 1e-12).unwrap();
    let oracle_gap = (ha - oa).norm().max((hb - ob).norm());
    let rel = (ha - hb).norm() / ha.norm().max(hb.norm());
    out.push((
        "11c".into(),
        verdict(
            rel >= 0.1 && oracle_gap < 1e-6,
            format!(
                "h^1_1 at r=20: in-plane {:.4e}i, oblique {:.4e}i, relative difference {rel:.3}, oracle gap {oracle_gap:e}",
                ha.im, hb.im
            ),
        ),
    ));
    out
}

fn run_cli(out: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_photonmodes"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_clear()
        .stdout(Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn c12_determinism() -> Verdict {
    let runs: [&[&str]; 4] = [
        &[
            "couplings",
            "--lambda",
            "1",
            "--taper",
            "sharp",
            "--rmin",
            "0.5",
            "--rmax",
            "200",
            "--points",
            "60",
        ],
        &["anisotropy", "--points", "16", "--rmax", "30"],
        &["fock", "--cap", "2"],
        &["planck", "--theta", "1", "--L", "30", "--box_tol", "0.05"],
    ];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        for args in runs {
            if !run_cli(dir.path(), args) {
                return verdict(false, format!("run {args:?} failed"));
            }
        }
    }
    let mut names: Vec<_> = std::fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in &names {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap_or_default();
        if a != b {
            return verdict(
                false,
                format!("{} differs between runs", name.to_string_lossy()),
            );
        }
    }
    verdict(
        names.len() >= 6,
        format!("{} CSV files byte-identical across two runs", names.len()),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: Vec<Criterion> = vec![
        ("1", c1_smooth_decay),
        ("2", c2_sharp_decay),
        ("3", c3_htilde_decay),
        ("4", c4_asymptotic_constants),
        ("5", c5_oracle_equivalence),
        ("6", c6_projector_identities),
        ("7", c7_spectral_equivalence),
        ("8", c8_ccr),
        ("9", c9_scalar_evolution),
        ("10", c10_planck),
    ];
    let mut failed = Vec::new();
    let mut report = |id: &str, v: &Verdict| {
        println!(
            "{} criterion {id}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        if !v.pass {
            failed.push(id.to_string());
        }
    };
    for (id, f) in criteria {
        report(id, &f());
    }
    let parts = c11_structural_zeros();
    let all = parts.iter().all(|(_, v)| v.pass);
    let detail = parts
        .iter()
        .map(|(id, v)| {
            format!(
                "[{id} {}] {}",
                if v.pass { "pass" } else { "fail" },
                v.detail
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    report("11", &verdict(all, detail));
    report("12", &c12_determinism());

    println!("acceptance: {}/12 criteria passed", 12 - failed.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
