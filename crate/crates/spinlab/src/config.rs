//! Run configuration: one INI-style text file with `[section]` headers and
//! `key = value` lines controls the physical parameters, the simulation
//! window, and the oscillator grid. Every field has a default, so the empty
//! file is valid; unknown sections or keys are errors with line positions.

use crate::dynamics::PhysicalParams;
use crate::spectrum::OscillatorConfig;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

/// Initial point and stepping of the `simulate` command.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulateSettings {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
    pub dt: f64,
    pub t_end: f64,
}

impl Default for SimulateSettings {
    fn default() -> Self {
        SimulateSettings {
            x: 1.0,
            y: 0.0,
            px: 0.0,
            py: 0.0,
            dt: 1e-3,
            t_end: std::f64::consts::TAU,
        }
    }
}

/// Grid used by the spectrum check inside `audit`, kept smaller than the
/// standalone `spectrum` command default so the full audit stays fast.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditSettings {
    pub spectrum_grid_points: usize,
    pub spectrum_eig_count: usize,
}

impl Default for AuditSettings {
    fn default() -> Self {
        AuditSettings {
            spectrum_grid_points: 64,
            spectrum_eig_count: 6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    pub simulate: SimulateSettings,
    pub spectrum: OscillatorConfig,
    pub audit: AuditSettings,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Physical,
    Simulate,
    Spectrum,
    Audit,
}

/// Parses a config file, starting from defaults.
pub fn parse_run_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    let mut section = Section::None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = stripped.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(ConfigError {
                    line: line_no,
                    message: "unterminated section header".into(),
                });
            };
            section = match name.trim() {
                "physical" => Section::Physical,
                "simulate" => Section::Simulate,
                "spectrum" => Section::Spectrum,
                "audit" => Section::Audit,
                other => {
                    return Err(ConfigError {
                        line: line_no,
                        message: format!("unknown section `{other}`"),
                    })
                }
            };
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(ConfigError {
                line: line_no,
                message: "expected `key = value`".into(),
            });
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        apply(&mut config, section, key, value, line_no)?;
    }
    Ok(config)
}

fn apply(
    config: &mut RunConfig,
    section: Section,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    let float = |value: &str| -> Result<f64, ConfigError> {
        let parsed: f64 = value.parse().map_err(|_| ConfigError {
            line,
            message: format!("`{value}` is not a number"),
        })?;
        if !parsed.is_finite() {
            return Err(ConfigError {
                line,
                message: format!("`{value}` is not finite"),
            });
        }
        Ok(parsed)
    };
    let count = |value: &str| -> Result<usize, ConfigError> {
        value.parse().map_err(|_| ConfigError {
            line,
            message: format!("`{value}` is not a nonnegative integer"),
        })
    };

    match section {
        Section::None => Err(ConfigError {
            line,
            message: format!("key `{key}` appears before any [section] header"),
        }),
        Section::Physical => {
            let p = &mut config.physical;
            match key {
                "charge" => p.charge = float(value)?,
                "mass" => p.mass = float(value)?,
                "light_speed" => p.light_speed = float(value)?,
                "field_b3" => p.field_b3 = float(value)?,
                "lande_g" => p.lande_g = float(value)?,
                "kappa" => p.kappa_value = float(value)?,
                other => {
                    return Err(unknown_key("physical", other, line));
                }
            }
            Ok(())
        }
        Section::Simulate => {
            let s = &mut config.simulate;
            match key {
                "x" => s.x = float(value)?,
                "y" => s.y = float(value)?,
                "px" => s.px = float(value)?,
                "py" => s.py = float(value)?,
                "dt" => s.dt = float(value)?,
                "t_end" => s.t_end = float(value)?,
                other => {
                    return Err(unknown_key("simulate", other, line));
                }
            }
            Ok(())
        }
        Section::Spectrum => {
            let s = &mut config.spectrum;
            match key {
                "mass" => s.mass = float(value)?,
                "omega" => s.omega = float(value)?,
                "hbar" => s.hbar = float(value)?,
                "half_width" => s.half_width = float(value)?,
                "grid_points" => s.grid_points = count(value)?,
                "eig_count" => s.eig_count = count(value)?,
                other => {
                    return Err(unknown_key("spectrum", other, line));
                }
            }
            Ok(())
        }
        Section::Audit => {
            let a = &mut config.audit;
            match key {
                "spectrum_grid_points" => a.spectrum_grid_points = count(value)?,
                "spectrum_eig_count" => a.spectrum_eig_count = count(value)?,
                other => {
                    return Err(unknown_key("audit", other, line));
                }
            }
            Ok(())
        }
    }
}

fn unknown_key(section: &str, key: &str, line: usize) -> ConfigError {
    ConfigError {
        line,
        message: format!("unknown key `{key}` in [{section}]"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_defaults() {
        let config = parse_run_config("").unwrap();
        assert_eq!(config, RunConfig::default());
        assert_eq!(config.physical.lande_g, 2.0);
        assert_eq!(config.spectrum.grid_points, 128);
        assert_eq!(config.audit.spectrum_grid_points, 64);
    }

    #[test]
    fn sections_and_comments_parse() {
        let text = "\
# comment
[physical]
field_b3 = 2.0   # omega0 = 1
kappa = 1.5

[simulate]
dt = 0.01
t_end = 1.0
";
        let config = parse_run_config(text).unwrap();
        assert_eq!(config.physical.field_b3, 2.0);
        assert_eq!(config.physical.kappa_value, 1.5);
        assert_eq!(config.simulate.dt, 0.01);
        assert_eq!(config.simulate.t_end, 1.0);
        // untouched fields keep defaults
        assert_eq!(config.physical.mass, 1.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_run_config("[physical]\nmass = abc").unwrap_err();
        assert_eq!(err.line, 2);

        let err = parse_run_config("mass = 1.0").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("before any"));

        let err = parse_run_config("[nope]").unwrap_err();
        assert!(err.message.contains("unknown section"));

        let err = parse_run_config("[physical]\nwomp = 1").unwrap_err();
        assert!(err.message.contains("unknown key"));

        let err = parse_run_config("[physical\nmass = 1").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn non_finite_values_are_rejected() {
        assert!(parse_run_config("[physical]\nmass = inf").is_err());
        assert!(parse_run_config("[physical]\nmass = nan").is_err());
    }
}
