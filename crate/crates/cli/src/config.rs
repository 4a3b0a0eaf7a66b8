//! Layered key/value configuration: defaults, then a `key = value` file,
//! then `PHOTONMODES_*` environment variables, then command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub const ENV_PREFIX: &str = "PHOTONMODES_";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Couplings,
    Decayfit,
    Anisotropy,
    Fock,
    Planck,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Couplings,
        Command::Decayfit,
        Command::Anisotropy,
        Command::Fock,
        Command::Planck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Couplings => "couplings",
            Command::Decayfit => "decayfit",
            Command::Anisotropy => "anisotropy",
            Command::Fock => "fock",
            Command::Planck => "planck",
        }
    }

    /// Accepted keys with their defaults; `None` marks keys that are
    /// optional or required (see [`Command::required`]).
    pub fn keys(self) -> &'static [(&'static str, Option<&'static str>)] {
        match self {
            Command::Couplings => &[
                ("out", Some(".")),
                ("lambda", None),
                ("taper", Some("smooth_bump")),
                ("taper_width", Some("0.5")),
                ("rmin", Some("0.1")),
                ("rmax", Some("500")),
                ("points", Some("200")),
                ("kinds", Some("h,htilde,htilde_grad")),
            ],
            Command::Decayfit => &[
                ("out", Some(".")),
                ("lambda", Some("1")),
                ("taper", Some("smooth_bump")),
                ("taper_width", Some("0.5")),
                ("kind", Some("h")),
                ("input", None),
                ("rmin", Some("50")),
                ("rmax", Some("500")),
                ("points", None),
                ("grid", None),
                ("envelope", None),
                ("band", None),
            ],
            Command::Anisotropy => &[
                ("out", Some(".")),
                ("lambda", Some("1")),
                ("taper", Some("smooth_bump")),
                ("taper_width", Some("0.5")),
                ("polarization", Some("1")),
                ("component", Some("1")),
                ("direction", Some("1,1,0")),
                ("rmin", Some("2")),
                ("rmax", Some("50")),
                ("points", Some("48")),
                ("gamma", Some("0.3,0.9")),
            ],
            Command::Fock => &[
                ("out", Some(".")),
                ("L", Some("6.283185307179586")),
                ("N", Some("1")),
                ("kcut", None),
                ("n_max", Some("3")),
                ("cap", Some("3")),
                ("times", Some("0.1,1,3.141592653589793,10")),
            ],
            Command::Planck => &[
                ("out", Some(".")),
                ("theta", None),
                ("kelvin", None),
                ("L", Some("50")),
                ("channels", Some("3")),
                ("mode_guard", Some("1000000000")),
                ("box_tol", Some("0.01")),
            ],
        }
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Command::Couplings => &["lambda"],
            _ => &[],
        }
    }

    fn knows(self, key: &str) -> bool {
        self.keys().iter().any(|(k, _)| *k == key)
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::UnknownCommand(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    UnknownCommand(String),
    UnknownKey {
        key: String,
        origin: String,
    },
    MissingValue(String),
    MissingKey(String),
    Invalid {
        key: String,
        value: String,
        reason: String,
    },
    File {
        path: String,
        reason: String,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnknownCommand(c) => write!(f, "unknown command `{c}`"),
            ConfigError::UnknownKey { key, origin } => write!(f, "unknown key `{key}` ({origin})"),
            ConfigError::MissingValue(k) => write!(f, "flag --{k} needs a value"),
            ConfigError::MissingKey(k) => write!(f, "missing required key `{k}`"),
            ConfigError::Invalid { key, value, reason } => {
                write!(f, "invalid value `{value}` for `{key}`: {reason}")
            }
            ConfigError::File { path, reason } => {
                write!(f, "cannot read config file {path}: {reason}")
            }
        }
    }
}

/// Where a resolved value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Default,
    File,
    Env,
    Flag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    values: BTreeMap<String, (String, Source)>,
}

/// Splits `--key value` / `--key=value` arguments; a flag followed by
/// another flag or nothing is read as `true`.
type Pairs = Vec<(String, String)>;

fn parse_flags(args: &[String]) -> Result<(Option<String>, Pairs), ConfigError> {
    let mut config_file = None;
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let Some(body) = arg.strip_prefix("--") else {
            return Err(ConfigError::UnknownKey {
                key: arg.clone(),
                origin: "positional argument".into(),
            });
        };
        let (key, value) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let next = args.get(i + 1);
                match next {
                    Some(v) if !v.starts_with("--") => {
                        i += 1;
                        (body.to_string(), v.clone())
                    }
                    _ => (body.to_string(), "true".to_string()),
                }
            }
        };
        let key = key.replace('-', "_");
        if key.is_empty() {
            return Err(ConfigError::MissingValue(arg.clone()));
        }
        if key == "config" {
            config_file = Some(value);
        } else {
            out.push((key, value));
        }
        i += 1;
    }
    Ok((config_file, out))
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str, path: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::File {
                path: path.to_string(),
                reason: format!("line {} is not `key = value`", n + 1),
            });
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Resolves the configuration for `command` from flags, an optional
    /// `--config` file and the given environment.
    pub fn resolve<I>(command: Command, args: &[String], env: I) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut values: BTreeMap<String, (String, Source)> = BTreeMap::new();
        for (k, d) in command.keys() {
            if let Some(d) = d {
                values.insert((*k).to_string(), ((*d).to_string(), Source::Default));
            }
        }
        let (file, flags) = parse_flags(args)?;
        if let Some(path) = file {
            let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::File {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            for (k, v) in parse_config_text(&text, &path)? {
                if !command.knows(&k) {
                    return Err(ConfigError::UnknownKey {
                        key: k,
                        origin: format!("config file {path}"),
                    });
                }
                values.insert(k, (v, Source::File));
            }
        }
        let env: BTreeMap<String, String> = env
            .into_iter()
            .filter(|(k, _)| k.starts_with(ENV_PREFIX))
            .collect();
        for (name, v) in &env {
            let suffix = &name[ENV_PREFIX.len()..];
            let own = command
                .keys()
                .iter()
                .find(|(k, _)| k.to_uppercase() == suffix);
            match own {
                Some((k, _)) => {
                    values.insert((*k).to_string(), (v.clone(), Source::Env));
                }
                None => {
                    // Keys of other commands may be set for them; anything
                    // else is a typo.
                    let anywhere = Command::ALL
                        .iter()
                        .any(|c| c.keys().iter().any(|(k, _)| k.to_uppercase() == suffix));
                    if !anywhere {
                        return Err(ConfigError::UnknownKey {
                            key: name.clone(),
                            origin: "environment".into(),
                        });
                    }
                }
            }
        }
        for (k, v) in flags {
            if !command.knows(&k) {
                return Err(ConfigError::UnknownKey {
                    key: k,
                    origin: "flag".into(),
                });
            }
            values.insert(k, (v, Source::Flag));
        }
        for k in command.required() {
            if !values.contains_key(*k) {
                return Err(ConfigError::MissingKey((*k).to_string()));
            }
        }
        Ok(Self { command, values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    #[cfg(test)]
    pub fn source(&self, key: &str) -> Option<Source> {
        self.values.get(key).map(|(_, s)| *s)
    }

    fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            key: key.to_string(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| Self::invalid(key, v, e.to_string())),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| ConfigError::MissingKey(key.to_string()))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse::<T>()
                    .map_err(|e| Self::invalid(key, v, e.to_string()))
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    /// A finite real number.
    pub fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get::<f64>(key)? {
            Some(x) if !x.is_finite() => Err(Self::invalid(
                key,
                self.raw(key).unwrap_or(""),
                "not finite",
            )),
            other => Ok(other),
        }
    }

    pub fn positive(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.real(key)? {
            Some(x) if x <= 0.0 => Err(Self::invalid(
                key,
                self.raw(key).unwrap_or(""),
                "must be positive",
            )),
            other => Ok(other),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.raw("out").unwrap_or("."))
    }
}
