use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Human-readable semantic role label used in control codes.
///
/// `Agent` and `Patient` are the core roles; everything else is treated as an
/// adjunct. Labels outside the fixed vocabulary are carried by `Other`, whose
/// payload is always uppercase ASCII.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoleLabel {
    Agent,
    Patient,
    Temporal,
    Locative,
    Manner,
    Cause,
    Extent,
    Purpose,
    Discourse,
    Goal,
    Adverbial,
    Modal,
    Negation,
    Direction,
    Predicative,
    Comitative,
    Other(String),
}

/// Adjunct labels a role can be remapped to when building negative samples.
pub const ADJUNCT_ROLES: [RoleLabel; 14] = [
    RoleLabel::Temporal,
    RoleLabel::Locative,
    RoleLabel::Manner,
    RoleLabel::Cause,
    RoleLabel::Extent,
    RoleLabel::Purpose,
    RoleLabel::Discourse,
    RoleLabel::Goal,
    RoleLabel::Adverbial,
    RoleLabel::Modal,
    RoleLabel::Negation,
    RoleLabel::Direction,
    RoleLabel::Predicative,
    RoleLabel::Comitative,
];

impl RoleLabel {
    pub fn as_str(&self) -> &str {
        match self {
            RoleLabel::Agent => "AGENT",
            RoleLabel::Patient => "PATIENT",
            RoleLabel::Temporal => "TEMPORAL",
            RoleLabel::Locative => "LOCATIVE",
            RoleLabel::Manner => "MANNER",
            RoleLabel::Cause => "CAUSE",
            RoleLabel::Extent => "EXTENT",
            RoleLabel::Purpose => "PURPOSE",
            RoleLabel::Discourse => "DISCOURSE",
            RoleLabel::Goal => "GOAL",
            RoleLabel::Adverbial => "ADVERBIAL",
            RoleLabel::Modal => "MODAL",
            RoleLabel::Negation => "NEGATION",
            RoleLabel::Direction => "DIRECTION",
            RoleLabel::Predicative => "PREDICATIVE",
            RoleLabel::Comitative => "COMITATIVE",
            RoleLabel::Other(name) => name,
        }
    }

    pub fn is_core(&self) -> bool {
        matches!(self, RoleLabel::Agent | RoleLabel::Patient)
    }

    /// Builds an `Other` label, normalizing to uppercase ASCII. Known names
    /// resolve to their dedicated variant.
    pub fn other(name: &str) -> RoleLabel {
        let upper: String =
            name.trim().chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_uppercase() } else { '_' }).collect();
        Self::from_name(&upper).unwrap_or(RoleLabel::Other(upper))
    }

    fn from_name(name: &str) -> Option<RoleLabel> {
        Some(match name {
            "AGENT" => RoleLabel::Agent,
            "PATIENT" => RoleLabel::Patient,
            "TEMPORAL" => RoleLabel::Temporal,
            "LOCATIVE" => RoleLabel::Locative,
            "MANNER" => RoleLabel::Manner,
            "CAUSE" => RoleLabel::Cause,
            "EXTENT" => RoleLabel::Extent,
            "PURPOSE" => RoleLabel::Purpose,
            "DISCOURSE" => RoleLabel::Discourse,
            "GOAL" => RoleLabel::Goal,
            "ADVERBIAL" => RoleLabel::Adverbial,
            "MODAL" => RoleLabel::Modal,
            "NEGATION" => RoleLabel::Negation,
            "DIRECTION" => RoleLabel::Direction,
            "PREDICATIVE" => RoleLabel::Predicative,
            "COMITATIVE" => RoleLabel::Comitative,
            _ => return None,
        })
    }

    fn from_function_tag(tag: &str) -> Option<RoleLabel> {
        Some(match tag {
            "TMP" => RoleLabel::Temporal,
            "LOC" => RoleLabel::Locative,
            "MNR" => RoleLabel::Manner,
            "CAU" => RoleLabel::Cause,
            "EXT" => RoleLabel::Extent,
            "PRP" | "PNC" => RoleLabel::Purpose,
            "DIS" => RoleLabel::Discourse,
            "GOL" => RoleLabel::Goal,
            "ADV" => RoleLabel::Adverbial,
            "MOD" => RoleLabel::Modal,
            "NEG" => RoleLabel::Negation,
            "DIR" => RoleLabel::Direction,
            "PRD" => RoleLabel::Predicative,
            "COM" => RoleLabel::Comitative,
            "PAG" => RoleLabel::Agent,
            "PPT" => RoleLabel::Patient,
            _ => return None,
        })
    }
}

impl fmt::Display for RoleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid role name {0:?}")]
pub struct InvalidRoleName(pub String);

/// Parses a serialized role name. Unknown names must already be uppercase
/// ASCII identifiers; `VERB` is reserved for the predicate and rejected.
impl FromStr for RoleLabel {
    type Err = InvalidRoleName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(role) = RoleLabel::from_name(s) {
            return Ok(role);
        }
        let valid = !s.is_empty()
            && s != "VERB"
            && s.starts_with(|c: char| c.is_ascii_uppercase())
            && s.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_' || c == '-');
        if valid {
            Ok(RoleLabel::Other(s.to_string()))
        } else {
            Err(InvalidRoleName(s.to_string()))
        }
    }
}

impl Serialize for RoleLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RoleLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Maps a PropBank argument tag to a role label.
///
/// `ARG0`/`ARG1` become `AGENT`/`PATIENT` and `ARGM-*` modifiers map through
/// their function tag. Numbered arguments `ARG2`..`ARG5` use `frame_function`
/// when supplied (either a PropBank function tag such as `GOL` or a free-form
/// label) and otherwise fall back to `Other` carrying the raw tag. Already
/// mapped names (`AGENT`, `TEMPORAL`, ...) map to themselves, so the function
/// is idempotent over its own output.
pub fn map_role_label(raw_tag: &str, frame_function: Option<&str>) -> RoleLabel {
    let tag = raw_tag.trim();
    let tag = tag.strip_prefix("B-").or_else(|| tag.strip_prefix("I-")).unwrap_or(tag);
    let upper = tag.to_ascii_uppercase();

    if let Some(role) = RoleLabel::from_name(&upper) {
        return role;
    }
    match upper.as_str() {
        "ARG0" | "A0" => return RoleLabel::Agent,
        "ARG1" | "A1" => return RoleLabel::Patient,
        _ => {}
    }
    if let Some(function) = upper.strip_prefix("ARGM-").or_else(|| upper.strip_prefix("AM-")) {
        return RoleLabel::from_function_tag(function).unwrap_or_else(|| RoleLabel::other(&upper));
    }
    let numbered =
        upper.strip_prefix("ARG").map(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())).unwrap_or(false);
    if numbered {
        if let Some(function) = frame_function.map(str::trim).filter(|f| !f.is_empty()) {
            let f_upper = function.to_ascii_uppercase();
            return RoleLabel::from_function_tag(&f_upper).unwrap_or_else(|| RoleLabel::other(&f_upper));
        }
    }
    RoleLabel::other(&upper)
}
