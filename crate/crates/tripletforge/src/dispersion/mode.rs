use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hybrid HE mode label, e.g. HE11 or HE12.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeLabel {
    pub azimuthal: u32,
    pub radial: u32,
}

impl ModeLabel {
    pub const HE11: ModeLabel = ModeLabel { azimuthal: 1, radial: 1 };
    pub const HE12: ModeLabel = ModeLabel { azimuthal: 1, radial: 2 };

    pub fn new(azimuthal: u32, radial: u32) -> Result<Self> {
        if azimuthal == 0 || radial == 0 {
            return Err(Error::Validation("HE mode orders start at 1".into()));
        }
        Ok(Self { azimuthal, radial })
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.azimuthal < 10 && self.radial < 10 {
            write!(f, "HE{}{}", self.azimuthal, self.radial)
        } else {
            write!(f, "HE{},{}", self.azimuthal, self.radial)
        }
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("unrecognised mode label '{s}' (expected e.g. HE11)"));
        let rest = s.trim().strip_prefix("HE").ok_or_else(bad)?;
        let (nu, m) = if let Some((a, b)) = rest.split_once(',') {
            (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)
        } else if rest.len() == 2 && rest.chars().all(|c| c.is_ascii_digit()) {
            let d: Vec<u32> = rest.chars().map(|c| c.to_digit(10).unwrap()).collect();
            (d[0], d[1])
        } else {
            return Err(bad());
        };
        ModeLabel::new(nu, m)
    }
}

impl Serialize for ModeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ModeLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
