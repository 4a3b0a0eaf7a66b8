//! Experiment drivers behind each subcommand.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use photonmodes::coupling::{
    fit_decay_exponent, geometric_radii, linear_radii, sample_polarized_profile, sample_profile,
    weighted_tail_diagnostic, CutoffSpec, ProfileKind, SampledProfile, Taper,
};
use photonmodes::fock::{
    build_lattice, ccr_transform_check, field_spectrum, scalar_mode_evolution,
    spectrum_equivalence_check, Channels,
};
use photonmodes::thermo::{
    box_free_energy, integral_free_energy, subtraction_identity_check, thermo_csv_rows,
    ThermalParams, THERMO_CSV_HEADER,
};
use photonmodes::{Error, Vec3};
use serde_json::json;

use crate::config::{ConfigError, RunConfig};

/// Deviation below which a commutator or phase check passes.
pub const CHECK_TOL: f64 = 1e-12;

/// `k_B / (ħc)` in 1/(m·K).
const KELVIN_TO_INVERSE_METRE: f64 = 1.380_649e-23 / (1.054_571_817e-34 * 299_792_458.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(String),
    Quadrature(String),
    Band(String),
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Quadrature(_) => 3,
            Failure::Band(_) => 4,
            Failure::Check(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Quadrature(m) => write!(f, "quadrature failure: {m}"),
            Failure::Band(m) => write!(f, "band violation: {m}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QuadratureBudgetExceeded { .. } => Failure::Quadrature(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("cannot write {}: {e}", path.display()))
}

fn write_file(cfg: &RunConfig, name: &str, contents: &str) -> Result<(), Failure> {
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_failure(&path, e))
}

fn emit(out: &mut dyn Write, line: String) {
    // A closed stdout must not turn into a panic.
    let _ = writeln!(out, "{line}");
}

fn cutoff(cfg: &RunConfig) -> Result<CutoffSpec, Failure> {
    let lambda = cfg
        .positive("lambda")?
        .ok_or(ConfigError::MissingKey("lambda".into()))?;
    let taper: Taper = cfg.require("taper")?;
    let width = cfg.real("taper_width")?.unwrap_or(0.5);
    Ok(CutoffSpec::new(lambda, taper, width)?)
}

fn radii_range(cfg: &RunConfig) -> Result<(f64, f64), Failure> {
    let rmin = cfg
        .positive("rmin")?
        .ok_or(ConfigError::MissingKey("rmin".into()))?;
    let rmax = cfg
        .positive("rmax")?
        .ok_or(ConfigError::MissingKey("rmax".into()))?;
    if rmax <= rmin {
        return Err(Failure::Config(format!(
            "rmax ({rmax}) must exceed rmin ({rmin})"
        )));
    }
    Ok((rmin, rmax))
}

fn point_count(cfg: &RunConfig, fallback: usize) -> Result<usize, Failure> {
    let n = cfg.get::<usize>("points")?.unwrap_or(fallback);
    if n < 2 {
        return Err(Failure::Config(format!(
            "points must be at least 2, got {n}"
        )));
    }
    Ok(n)
}

fn summary(p: &SampledProfile) -> String {
    format!(
        "kind={} rows={} min={:e} max={:e} sign_changes={} oscillatory={}",
        p.kind,
        p.len(),
        p.min_value(),
        p.max_value(),
        p.sign_changes(),
        is_oscillatory(p)
    )
}

/// A profile counts as oscillatory once it changes sign at least this often.
pub const OSCILLATORY_SIGN_CHANGES: usize = 10;

pub fn is_oscillatory(p: &SampledProfile) -> bool {
    p.sign_changes() >= OSCILLATORY_SIGN_CHANGES
}

pub fn couplings(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let spec = cutoff(cfg)?;
    let (rmin, rmax) = radii_range(cfg)?;
    let points = point_count(cfg, 200)?;
    let kinds: Vec<ProfileKind> = cfg
        .list::<String>("kinds")?
        .unwrap_or_default()
        .iter()
        .map(|s| s.parse::<ProfileKind>())
        .collect::<Result<_, _>>()?;
    if kinds.is_empty() || kinds.contains(&ProfileKind::HPolarized) {
        return Err(Failure::Config(
            "kinds must list h, htilde and/or htilde_grad".into(),
        ));
    }
    let radii = geometric_radii(rmin, rmax, points);
    for kind in kinds {
        let profile = sample_profile(&spec, kind, &radii)?;
        write_file(cfg, &format!("couplings_{kind}.csv"), &profile.to_csv())?;
        emit(out, summary(&profile));
    }
    Ok(())
}

/// Expected exponent bands when none is configured.
fn default_band(kind: ProfileKind, envelope: bool) -> (f64, f64) {
    match (kind, envelope) {
        (ProfileKind::H, true) => (-2.1, -1.9),
        (ProfileKind::Htilde, _) => (-1.55, -1.45),
        (ProfileKind::HtildeGrad, _) => (-2.6, -2.4),
        _ => (-2.55, -2.45),
    }
}

pub fn decayfit(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let (rmin, rmax) = radii_range(cfg)?;
    let profile = match cfg.raw("input") {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {path}: {e}")))?;
            SampledProfile::from_csv(&text)?
        }
        None => {
            let spec = cutoff(cfg)?;
            let kind: ProfileKind = cfg.require("kind")?;
            if kind == ProfileKind::HPolarized {
                return Err(Failure::Config(
                    "use the anisotropy command for polarized profiles".into(),
                ));
            }
            let envelope = cfg
                .get::<bool>("envelope")?
                .unwrap_or(spec.taper == Taper::Sharp);
            let linear = match cfg.raw("grid") {
                None => envelope,
                Some("linear") => true,
                Some("geometric") => false,
                Some(other) => {
                    return Err(Failure::Config(format!(
                        "grid must be linear or geometric, got `{other}`"
                    )));
                }
            };
            let points = point_count(cfg, if envelope { 3000 } else { 60 })?;
            let radii = if linear {
                linear_radii(rmin, rmax, points)
            } else {
                geometric_radii(rmin, rmax, points)
            };
            let p = sample_profile(&spec, kind, &radii)?;
            write_file(cfg, &format!("decayfit_{kind}.csv"), &p.to_csv())?;
            p
        }
    };
    let envelope = cfg
        .get::<bool>("envelope")?
        .unwrap_or(profile.cutoff.taper == Taper::Sharp);
    let band = match cfg.list::<f64>("band")? {
        Some(b) if b.len() == 2 && b[0] < b[1] => (b[0], b[1]),
        Some(_) => return Err(Failure::Config("band must be `lo,hi` with lo < hi".into())),
        None => default_band(profile.kind, envelope),
    };
    let fit = fit_decay_exponent(&profile, (rmin, rmax), envelope)?;
    let pass = fit.exponent >= band.0 && fit.exponent <= band.1;
    let record = json!({
        "kind": profile.kind.as_str(),
        "taper": profile.cutoff.taper.as_str(),
        "lambda": profile.cutoff.lambda,
        "fit": fit,
        "band": [band.0, band.1],
        "pass": pass,
    });
    emit(out, record.to_string());
    if pass {
        Ok(())
    } else {
        Err(Failure::Band(format!(
            "exponent {} outside [{}, {}]",
            fit.exponent, band.0, band.1
        )))
    }
}

pub fn anisotropy(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let spec = cutoff(cfg)?;
    let (rmin, rmax) = radii_range(cfg)?;
    let points = point_count(cfg, 48)?;
    let lambda_index: usize = cfg.require("polarization")?;
    let component: usize = cfg.require("component")?;
    let dir = cfg.list::<f64>("direction")?.unwrap_or_default();
    if dir.len() != 3 || dir.iter().all(|&x| x == 0.0) || dir.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Config(
            "direction must be three numbers, not all zero".into(),
        ));
    }
    let gammas = cfg.list::<f64>("gamma")?.unwrap_or_default();
    let direction = Vec3::new(dir[0], dir[1], dir[2]);
    let radii = geometric_radii(rmin, rmax, points);
    let profile = sample_polarized_profile(&spec, lambda_index, component, &direction, &radii)?;
    write_file(cfg, "anisotropy.csv", &profile.to_csv())?;
    emit(
        out,
        format!(
            "polarization={lambda_index} component={component} direction={},{},{} value_at_rmax={:e}",
            dir[0],
            dir[1],
            dir[2],
            profile.values()[profile.len() - 1]
        ),
    );
    for gamma in gammas {
        let d = weighted_tail_diagnostic(&profile, gamma)?;
        emit(
            out,
            format!(
                "gamma={gamma} ratio={:e} converging={}",
                d.ratio,
                d.converging()
            ),
        );
    }
    Ok(())
}

fn cap_value(cfg: &RunConfig) -> Result<Option<u32>, Failure> {
    match cfg.raw("cap") {
        None | Some("none") => Ok(None),
        Some(_) => Ok(cfg.get::<u32>("cap")?),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn fock(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let box_side = cfg.positive("L")?.unwrap_or(2.0 * PI);
    let max_index: i64 = cfg.require("N")?;
    let kcut = cfg.positive("kcut")?;
    let n_max: u32 = cfg.require("n_max")?;
    if n_max < 1 {
        return Err(Failure::Config("n_max must be at least 1".into()));
    }
    let cap = cap_value(cfg)?;
    let times = cfg.list::<f64>("times")?.unwrap_or_default();
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Failure::Config("times must be finite".into()));
    }
    let lattice = build_lattice(box_side, max_index, kcut)?;
    emit(
        out,
        format!(
            "lattice modes={} on_axis={}",
            lattice.len(),
            lattice.on_axis_count()
        ),
    );

    let mut failures = Vec::new();
    let report = spectrum_equivalence_check(&lattice, n_max, cap)?;
    let mut line = format!(
        "{} spectrum_equivalence states={} energies={}",
        verdict(report.equal),
        report.states,
        report.distinct_energies
    );
    if let Some(d) = &report.first_discrepancy {
        line.push_str(&format!(" first_discrepancy={}", json!(d)));
        failures.push("spectrum_equivalence");
    }
    emit(out, line);
    let spectrum = field_spectrum(&lattice, Channels::Three, n_max, cap)?;
    write_file(cfg, "fock_spectrum.csv", &spectrum.to_csv())?;

    let mut ccr: f64 = 0.0;
    for mode in &lattice.modes {
        ccr = ccr.max(ccr_transform_check(&mode.k, n_max)?);
    }
    let ok = ccr < CHECK_TOL;
    if !ok {
        failures.push("ccr_transform");
    }
    emit(
        out,
        format!("{} ccr_transform max_deviation={ccr:e}", verdict(ok)),
    );

    let mut worst: f64 = 0.0;
    let mut positive: f64 = 0.0;
    let mut signs = Vec::new();
    for mode in &lattice.modes {
        for &t in &times {
            let r = scalar_mode_evolution(&mode.k, t, n_max)?;
            worst = worst.max(r.deviation);
            positive = positive.max(r.positive_phase_deviation);
            if !signs.contains(&r.sign) {
                signs.push(r.sign);
            }
        }
    }
    let ok = worst < CHECK_TOL && signs.len() <= 1;
    if !ok {
        failures.push("scalar_evolution");
    }
    let sign = signs.first().map_or("none".to_string(), |s| s.to_string());
    emit(
        out,
        format!(
            "{} scalar_evolution max_deviation={worst:e} sign={sign} positive_phase_deviation={positive:e}",
            verdict(ok)
        ),
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failures.join(", ")))
    }
}

pub fn planck(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let theta = match (cfg.positive("theta")?, cfg.positive("kelvin")?) {
        (Some(_), Some(_)) => {
            return Err(Failure::Config(
                "set either theta or kelvin, not both".into(),
            ))
        }
        (Some(t), None) => t,
        (None, Some(k)) => k * KELVIN_TO_INVERSE_METRE,
        (None, None) => 1.0,
    };
    let box_side = cfg.positive("L")?.unwrap_or(50.0);
    let channels: u32 = cfg.require("channels")?;
    if !(1..=3).contains(&channels) {
        return Err(Failure::Config(format!(
            "channels must be 1, 2 or 3, got {channels}"
        )));
    }
    let guard: u64 = cfg.require("mode_guard")?;
    let box_tol = cfg.positive("box_tol")?.unwrap_or(0.01);
    let params = ThermalParams::cube(theta, box_side)?;

    let integral = integral_free_energy(&params, channels)?;
    let boxed = box_free_energy(box_side, theta, channels, guard)?;
    let closed = -PI * PI * theta.powi(3) / 90.0;
    let d = integral.per_mode_density;
    let mut failures = Vec::new();

    let rel = ((d - closed) / closed).abs();
    let ok = rel < 1e-8;
    if !ok {
        failures.push("planck_integral");
    }
    emit(
        out,
        format!(
            "{} planck_integral density={d:e} closed_form={closed:e} rel_dev={rel:e}",
            verdict(ok)
        ),
    );

    let rel_box = ((boxed.per_mode_density - d) / d).abs();
    let ok = rel_box < box_tol;
    if !ok {
        failures.push("box_density");
    }
    emit(
        out,
        format!(
            "{} box_density density={:e} rel_dev={rel_box:e} tol={box_tol:e}",
            verdict(ok),
            boxed.per_mode_density
        ),
    );

    let sub = subtraction_identity_check(box_side, theta, guard)?;
    let ok = sub.rel_deviation < 1e-12;
    if !ok {
        failures.push("subtraction_identity");
    }
    emit(
        out,
        format!(
            "{} subtraction_identity rel_dev={:e}",
            verdict(ok),
            sub.rel_deviation
        ),
    );
    emit(
        out,
        format!(
            "free_energy channels={channels} standard_sign={:e} paper_sign={:e}",
            integral.standard_sign(),
            integral.paper_sign()
        ),
    );

    let mut csv = format!("{THERMO_CSV_HEADER}\n");
    csv.push_str(&thermo_csv_rows(box_side, theta, &integral));
    csv.push_str(&thermo_csv_rows(box_side, theta, &boxed));
    write_file(cfg, "planck.csv", &csv)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failures.join(", ")))
    }
}

pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    use crate::config::Command;
    match cfg.command {
        Command::Couplings => couplings(cfg, out),
        Command::Decayfit => decayfit(cfg, out),
        Command::Anisotropy => anisotropy(cfg, out),
        Command::Fock => fock(cfg, out),
        Command::Planck => planck(cfg, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_documented_exit_codes() {
        let q: Failure = Error::QuadratureBudgetExceeded {
            estimate: 1.0,
            abs_error: 1e-3,
        }
        .into();
        assert_eq!(q.exit_code(), 3);
        let c: Failure = Error::NonPositiveRadius(0.0).into();
        assert_eq!(c.exit_code(), 2);
        assert_eq!(Failure::Band(String::new()).exit_code(), 4);
        assert_eq!(Failure::Check(String::new()).exit_code(), 5);
        let k: Failure = ConfigError::MissingKey("lambda".into()).into();
        assert_eq!(k.exit_code(), 2);
    }

    #[test]
    fn default_bands_follow_the_expected_exponents() {
        assert_eq!(default_band(ProfileKind::H, false), (-2.55, -2.45));
        assert_eq!(default_band(ProfileKind::H, true), (-2.1, -1.9));
        assert_eq!(default_band(ProfileKind::Htilde, false), (-1.55, -1.45));
        assert_eq!(default_band(ProfileKind::HtildeGrad, false), (-2.6, -2.4));
    }

    #[test]
    fn kelvin_conversion() {
        // k_B T/(ħc) at 1 K is about 436.7 per metre.
        assert!((KELVIN_TO_INVERSE_METRE - 436.7).abs() < 0.1);
    }
}
