//! Material constants, unit handling and the built-in material registry.
//!
//! Everything inside the crate works in SI base units. The [`Unit`] suffixes
//! only appear at the configuration and CSV boundary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Allowed mismatch between `young_modulus * s11e` and one.
pub const COMPLIANCE_RECIPROCITY_TOL: f64 = 1e-6;

/// Default silicon Young modulus (Pa).
pub const SILICON_YOUNG_MODULUS: f64 = 169e9;
/// Default PZT-5H Young modulus (Pa).
pub const PZT5H_YOUNG_MODULUS: f64 = 60.6e9;
/// Default PZT-5H transverse piezoelectric coefficient (m/V).
pub const PZT5H_D31: f64 = -274e-12;

/// Elastic and piezoelectric constants of one constituent layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    name: String,
    young_modulus: f64,
    d31: Option<f64>,
    s11e: Option<f64>,
}

impl Material {
    /// A purely elastic material.
    pub fn elastic(name: impl Into<String>, young_modulus: f64) -> Result<Self> {
        let name = name.into();
        if !(young_modulus.is_finite() && young_modulus > 0.0) {
            return Err(Error::InvalidMaterial {
                name,
                reason: format!("Young modulus must be positive, got {young_modulus:e} Pa"),
            });
        }
        Ok(Self {
            name,
            young_modulus,
            d31: None,
            s11e: None,
        })
    }

    /// A piezoelectric material. When `s11e` is given it must be the
    /// reciprocal of `young_modulus`.
    pub fn piezoelectric(
        name: impl Into<String>,
        young_modulus: f64,
        d31: f64,
        s11e: Option<f64>,
    ) -> Result<Self> {
        let mut m = Self::elastic(name, young_modulus)?;
        if !d31.is_finite() {
            return Err(Error::InvalidMaterial {
                name: m.name,
                reason: "d31 must be finite".into(),
            });
        }
        if let Some(s) = s11e {
            let mismatch = (young_modulus * s - 1.0).abs();
            if mismatch.is_nan() || mismatch > COMPLIANCE_RECIPROCITY_TOL {
                return Err(Error::InvalidMaterial {
                    name: m.name,
                    reason: format!(
                        "E * s11E = {:.9} is not 1 (E = {young_modulus:e} Pa, s11E = {s:e} 1/Pa)",
                        young_modulus * s
                    ),
                });
            }
        }
        m.d31 = Some(d31);
        m.s11e = s11e;
        Ok(m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Young modulus in Pa.
    pub fn young_modulus(&self) -> f64 {
        self.young_modulus
    }

    /// Transverse piezoelectric coefficient in m/V, `None` for passive materials.
    pub fn d31(&self) -> Option<f64> {
        self.d31
    }

    /// Compliance at constant electric field in 1/Pa.
    pub fn s11e(&self) -> Option<f64> {
        self.s11e
    }

    pub fn is_piezoelectric(&self) -> bool {
        self.d31.is_some()
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (E = {} GPa", self.name, self.young_modulus / 1e9)?;
        if let Some(d31) = self.d31 {
            write!(f, ", d31 = {} pm/V", d31 / 1e-12)?;
        }
        if let Some(s) = self.s11e {
            write!(f, ", s11E = {:.6} 1/TPa", s / 1e-12)?;
        }
        write!(f, ")")
    }
}

/// Name-indexed set of materials. Lookups ignore ASCII case.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRegistry {
    entries: BTreeMap<String, Material>,
}

impl MaterialRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Registry holding `silicon` and `pzt-5h`.
    ///
    /// These constants are assumptions (standard datasheet values), not
    /// measured inputs. The PZT-5H compliance is stored as the exact
    /// reciprocal of its modulus, 16.50 1/TPa.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.insert(
            Material::elastic("silicon", SILICON_YOUNG_MODULUS).expect("valid silicon constants"),
        );
        reg.insert(
            Material::piezoelectric(
                "pzt-5h",
                PZT5H_YOUNG_MODULUS,
                PZT5H_D31,
                Some(1.0 / PZT5H_YOUNG_MODULUS),
            )
            .expect("valid PZT-5H constants"),
        );
        reg
    }

    /// Adds or replaces an entry; returns the material it replaced.
    pub fn insert(&mut self, material: Material) -> Option<Material> {
        self.entries
            .insert(material.name.to_ascii_lowercase(), material)
    }

    pub fn lookup(&self, name: &str) -> Result<&Material> {
        self.entries
            .get(&name.to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownMaterial {
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Material> {
        self.entries.values()
    }
}

impl Default for MaterialRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Unit suffixes accepted at the configuration boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Micrometer,
    Gigapascal,
    PicometerPerVolt,
    Volt,
    PerTerapascal,
}

impl Unit {
    /// Power of ten taking a value in this unit to SI base units.
    pub fn exponent(self) -> i32 {
        match self {
            Unit::Micrometer => -6,
            Unit::Gigapascal => 9,
            Unit::PicometerPerVolt => -12,
            Unit::Volt => 0,
            Unit::PerTerapascal => -12,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Unit::Micrometer => "um",
            Unit::Gigapascal => "GPa",
            Unit::PicometerPerVolt => "pm_per_V",
            Unit::Volt => "V",
            Unit::PerTerapascal => "per_TPa",
        }
    }

    /// Scales by an exactly representable power of ten (multiply or divide),
    /// so results are correctly rounded: `5 um` is exactly `5e-6`.
    pub fn to_si(self, value: f64) -> f64 {
        let e = self.exponent();
        let p = 10f64.powi(e.abs());
        if e >= 0 {
            value * p
        } else {
            value / p
        }
    }

    pub fn from_si(self, value: f64) -> f64 {
        let e = self.exponent();
        let p = 10f64.powi(e.abs());
        if e >= 0 {
            value / p
        } else {
            value * p
        }
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "um" => Ok(Unit::Micrometer),
            "GPa" => Ok(Unit::Gigapascal),
            "pm_per_V" => Ok(Unit::PicometerPerVolt),
            "V" => Ok(Unit::Volt),
            "per_TPa" => Ok(Unit::PerTerapascal),
            other => Err(Error::UnsupportedUnit(other.to_string())),
        }
    }
}

/// Converts `value` expressed in the unit named `unit` to SI.
pub fn to_si(value: f64, unit: &str) -> Result<f64> {
    Ok(unit.parse::<Unit>()?.to_si(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtin_lookup() {
        let reg = MaterialRegistry::builtin();
        let si = reg.lookup("silicon").unwrap();
        assert_eq!(si.young_modulus(), 169e9);
        assert!(si.d31().is_none());

        let pzt = reg.lookup("PZT-5H").unwrap();
        assert_eq!(pzt.young_modulus(), 60.6e9);
        assert_eq!(pzt.d31(), Some(-274e-12));
        let s = pzt.s11e().unwrap();
        assert!((s / 16.5e-12 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn unknown_material_lists_available() {
        let err = MaterialRegistry::builtin().lookup("unobtainium").unwrap_err();
        match &err {
            Error::UnknownMaterial { name, available } => {
                assert_eq!(name, "unobtainium");
                assert!(available.contains("silicon") && available.contains("pzt-5h"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn override_replaces_entry() {
        let mut reg = MaterialRegistry::builtin();
        let old = reg.insert(Material::elastic("Silicon", 130e9).unwrap());
        assert!(old.is_some());
        assert_eq!(reg.lookup("silicon").unwrap().young_modulus(), 130e9);
        assert_eq!(reg.names().count(), 2);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(Material::elastic("x", 0.0).is_err());
        assert!(Material::elastic("x", -1.0).is_err());
        assert!(Material::elastic("x", f64::NAN).is_err());
        // 60.6 GPa against 16.5 1/TPa is off by 1e-4
        assert!(Material::piezoelectric("x", 60.6e9, -274e-12, Some(16.5e-12)).is_err());
        assert!(Material::piezoelectric("x", 1e11, 3e-10, Some(1e-11)).is_ok());
    }

    #[test]
    fn unit_conversions() {
        assert_eq!(to_si(5.0, "um").unwrap(), 5e-6);
        assert_eq!(to_si(169.0, "GPa").unwrap(), 1.69e11);
        assert_eq!(to_si(-274.0, "pm_per_V").unwrap(), -2.74e-10);
        assert_eq!(to_si(50.0, "V").unwrap(), 50.0);
        assert_eq!(to_si(16.5, "per_TPa").unwrap(), 16.5e-12);
        assert_eq!(
            to_si(1.0, "mm").unwrap_err(),
            Error::UnsupportedUnit("mm".into())
        );
    }

    #[test]
    fn registry_reciprocity() {
        for m in MaterialRegistry::builtin().iter() {
            if let Some(s) = m.s11e() {
                assert!((m.young_modulus() * s - 1.0).abs() <= COMPLIANCE_RECIPROCITY_TOL);
            }
        }
    }

    proptest! {
        #[test]
        fn unit_round_trip(v in -1e6f64..1e6, idx in 0usize..5) {
            let unit = [Unit::Micrometer, Unit::Gigapascal, Unit::PicometerPerVolt, Unit::Volt, Unit::PerTerapascal][idx];
            let back = unit.from_si(unit.to_si(v));
            prop_assert!((back - v).abs() <= 1e-15 * v.abs());
        }
    }
}
