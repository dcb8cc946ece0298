//! Line-oriented configuration format.
//!
//! ```text
//! # comment; a `#` after a value also starts one
//! [material.substrate]
//! name = silicon
//!
//! [material.piezo]
//! E_GPa = 60.6
//! d31_pm_per_V = -274
//!
//! [geometry]
//! beam_length_um = 850
//! beam_width_um = 30
//! substrate_thickness_um = 5
//! piezo_thickness_um = 1
//! mirror_side_um = 300
//!
//! [drive]
//! voltage_V = 50
//! ```
//!
//! Parsing is strict: every section appears once, keys are known and not
//! repeated, values carry the unit their key suffix names.

use std::collections::BTreeMap;
use std::fmt;

use crate::design::{Geometry, ScannerDesign};
use crate::materials::{Material, MaterialRegistry, Unit};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse { line: usize, message: String },
    Validation { key: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::Validation { key, message } => write!(f, "{key}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn parse_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        message: message.into(),
    }
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        key: key.into(),
        message: message.into(),
    }
}

/// A material given either by registry name or by explicit constants (SI).
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialSpec {
    Named(String),
    Explicit {
        young_modulus: Option<f64>,
        d31: Option<f64>,
        s11e: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDoc {
    pub substrate: MaterialSpec,
    pub piezo: MaterialSpec,
    /// SI units.
    pub geometry: Geometry,
    pub voltage: f64,
}

struct Section {
    name: &'static str,
    keys: &'static [(&'static str, Option<Unit>)],
}

const SECTIONS: [Section; 4] = [
    Section {
        name: "material.substrate",
        keys: &[("name", None), ("E_GPa", Some(Unit::Gigapascal))],
    },
    Section {
        name: "material.piezo",
        keys: &[
            ("name", None),
            ("E_GPa", Some(Unit::Gigapascal)),
            ("d31_pm_per_V", Some(Unit::PicometerPerVolt)),
            ("s11E_per_TPa", Some(Unit::PerTerapascal)),
        ],
    },
    Section {
        name: "geometry",
        keys: &[
            ("beam_length_um", Some(Unit::Micrometer)),
            ("beam_width_um", Some(Unit::Micrometer)),
            ("substrate_thickness_um", Some(Unit::Micrometer)),
            ("piezo_thickness_um", Some(Unit::Micrometer)),
            ("mirror_side_um", Some(Unit::Micrometer)),
        ],
    },
    Section {
        name: "drive",
        keys: &[("voltage_V", Some(Unit::Volt))],
    },
];

#[derive(Debug, Clone)]
enum Value {
    Text(String),
    Number(f64),
}

type Sections = BTreeMap<&'static str, BTreeMap<&'static str, (usize, Value)>>;

fn strip_quotes(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
}

fn tokenize(text: &str) -> Result<Sections, ConfigError> {
    let mut sections: Sections = BTreeMap::new();
    let mut current: Option<&Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let name = inner
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line_no, format!("malformed section header `{line}`")))?
                .trim();
            let section = SECTIONS
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| parse_err(line_no, format!("unknown section [{name}]")))?;
            if sections.insert(section.name, BTreeMap::new()).is_some() {
                return Err(parse_err(line_no, format!("duplicate section [{name}]")));
            }
            current = Some(section);
            continue;
        }

        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected `key = value`, got `{line}`")))?;
        // trailing comment after the value
        let value = value.split_once('#').map_or(value, |(v, _)| v);
        let (key, value) = (key.trim(), strip_quotes(value.trim()));
        let section = current.ok_or_else(|| parse_err(line_no, format!("key `{key}` outside any section")))?;
        let &(key, unit) = section
            .keys
            .iter()
            .find(|(k, _)| *k == key)
            .ok_or_else(|| parse_err(line_no, format!("unknown key `{key}` in [{}]", section.name)))?;
        if value.is_empty() {
            return Err(parse_err(line_no, format!("empty value for `{key}`")));
        }
        let value = match unit {
            None => Value::Text(value.to_string()),
            Some(unit) => {
                let v: f64 = value
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("`{key}`: `{value}` is not a number")))?;
                if !v.is_finite() {
                    return Err(parse_err(line_no, format!("`{key}` must be finite")));
                }
                Value::Number(unit.to_si(v))
            }
        };
        let entries = sections.get_mut(section.name).expect("section registered");
        if entries.insert(key, (line_no, value)).is_some() {
            return Err(parse_err(line_no, format!("duplicate key `{key}` in [{}]", section.name)));
        }
    }
    Ok(sections)
}

fn section<'a>(
    sections: &'a Sections,
    name: &'static str,
) -> Result<&'a BTreeMap<&'static str, (usize, Value)>, ConfigError> {
    sections
        .get(name)
        .ok_or_else(|| invalid(name, "missing section"))
}

fn number(entries: &BTreeMap<&'static str, (usize, Value)>, key: &str) -> Option<f64> {
    match entries.get(key) {
        Some((_, Value::Number(v))) => Some(*v),
        _ => None,
    }
}

fn material_spec(sections: &Sections, name: &'static str) -> Result<MaterialSpec, ConfigError> {
    let entries = section(sections, name)?;
    let named = match entries.get("name") {
        Some((_, Value::Text(t))) => Some(t.clone()),
        _ => None,
    };
    let young_modulus = number(entries, "E_GPa");
    let d31 = number(entries, "d31_pm_per_V");
    let s11e = number(entries, "s11E_per_TPa");
    let explicit = young_modulus.is_some() || d31.is_some() || s11e.is_some();

    match (named, explicit) {
        (Some(_), true) => Err(invalid(
            name,
            "give either a registry `name` or explicit constants, not both",
        )),
        (Some(n), false) => Ok(MaterialSpec::Named(n)),
        (None, true) => Ok(MaterialSpec::Explicit {
            young_modulus,
            d31,
            s11e,
        }),
        (None, false) => Err(invalid(format!("{name}.name"), "missing (or give explicit constants)")),
    }
}

pub fn parse_config(text: &str) -> Result<ConfigDoc, ConfigError> {
    let sections = tokenize(text)?;
    let substrate = material_spec(&sections, "material.substrate")?;
    let piezo = material_spec(&sections, "material.piezo")?;

    let geom = section(&sections, "geometry")?;
    let positive = |key: &'static str| -> Result<f64, ConfigError> {
        let v = number(geom, key).ok_or_else(|| invalid(format!("geometry.{key}"), "missing"))?;
        if v <= 0.0 {
            return Err(invalid(format!("geometry.{key}"), format!("must be positive, got {v:e} m")));
        }
        Ok(v)
    };
    let geometry = Geometry {
        beam_length: positive("beam_length_um")?,
        beam_width: positive("beam_width_um")?,
        substrate_thickness: positive("substrate_thickness_um")?,
        piezo_thickness: positive("piezo_thickness_um")?,
        mirror_side: positive("mirror_side_um")?,
    };
    let voltage = number(section(&sections, "drive")?, "voltage_V")
        .ok_or_else(|| invalid("drive.voltage_V", "missing"))?;

    Ok(ConfigDoc {
        substrate,
        piezo,
        geometry,
        voltage,
    })
}

impl ConfigDoc {
    /// Resolves named materials against `registry` and checks explicit ones.
    pub fn resolve(&self, registry: &MaterialRegistry) -> Result<ScannerDesign, ConfigError> {
        let substrate = resolve_material(registry, &self.substrate, "material.substrate", false)?;
        let piezo = resolve_material(registry, &self.piezo, "material.piezo", true)?;
        Ok(ScannerDesign {
            substrate,
            piezo,
            geometry: self.geometry,
            voltage: self.voltage,
        })
    }
}

fn resolve_material(
    registry: &MaterialRegistry,
    spec: &MaterialSpec,
    key: &str,
    needs_d31: bool,
) -> Result<Material, ConfigError> {
    let material = match spec {
        MaterialSpec::Named(name) => registry
            .lookup(name)
            .map_err(|e| invalid(format!("{key}.name"), e.to_string()))?
            .clone(),
        MaterialSpec::Explicit {
            young_modulus,
            d31,
            s11e,
        } => {
            let e = match (young_modulus, s11e) {
                (Some(e), _) => *e,
                (None, Some(s)) if *s > 0.0 => 1.0 / s,
                (None, Some(_)) => return Err(invalid(format!("{key}.s11E_per_TPa"), "must be positive")),
                (None, None) => return Err(invalid(format!("{key}.E_GPa"), "missing")),
            };
            let label = format!("custom {}", key.trim_start_matches("material."));
            let made = match d31 {
                Some(d) => Material::piezoelectric(label, e, *d, *s11e),
                None => Material::elastic(label, e),
            };
            made.map_err(|err| invalid(key, err.to_string()))?
        }
    };
    if needs_d31 && !material.is_piezoelectric() {
        let what = match spec {
            MaterialSpec::Named(_) => format!("{key}.name"),
            MaterialSpec::Explicit { .. } => format!("{key}.d31_pm_per_V"),
        };
        return Err(invalid(
            what,
            format!("`{}` has no d31 coefficient", material.name()),
        ));
    }
    Ok(material)
}
