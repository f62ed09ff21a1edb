use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the seven great powers.
///
/// The declaration order is fixed and used for dummy coding in the
/// analytics layer, where `Rus` is the regression baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Power {
    #[serde(rename = "AUS")]
    Aus,
    #[serde(rename = "ENG")]
    Eng,
    #[serde(rename = "FRA")]
    Fra,
    #[serde(rename = "GER")]
    Ger,
    #[serde(rename = "ITA")]
    Ita,
    #[serde(rename = "RUS")]
    Rus,
    #[serde(rename = "TUR")]
    Tur,
}

impl Power {
    pub const ALL: [Power; 7] = [
        Power::Aus,
        Power::Eng,
        Power::Fra,
        Power::Ger,
        Power::Ita,
        Power::Rus,
        Power::Tur,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Power::Aus => "AUS",
            Power::Eng => "ENG",
            Power::Fra => "FRA",
            Power::Ger => "GER",
            Power::Ita => "ITA",
            Power::Rus => "RUS",
            Power::Tur => "TUR",
        }
    }

    /// Country name as it appears in messages ("England").
    pub fn name(self) -> &'static str {
        match self {
            Power::Aus => "Austria",
            Power::Eng => "England",
            Power::Fra => "France",
            Power::Ger => "Germany",
            Power::Ita => "Italy",
            Power::Rus => "Russia",
            Power::Tur => "Turkey",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Resolves a country name, adjective or code, case-insensitively.
    pub fn from_name(s: &str) -> Option<Power> {
        let lower = s.trim().to_ascii_lowercase();
        let p = match lower.as_str() {
            "aus" | "austria" | "austrian" | "austria-hungary" => Power::Aus,
            "eng" | "england" | "english" | "britain" => Power::Eng,
            "fra" | "france" | "french" => Power::Fra,
            "ger" | "germany" | "german" => Power::Ger,
            "ita" | "italy" | "italian" => Power::Ita,
            "rus" | "russia" | "russian" => Power::Rus,
            "tur" | "turkey" | "turkish" => Power::Tur,
            _ => return None,
        };
        Some(p)
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown power `{0}`")]
pub struct UnknownPower(pub String);

impl FromStr for Power {
    type Err = UnknownPower;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Power::from_name(s).ok_or_else(|| UnknownPower(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_distinct_powers_in_fixed_order() {
        let codes: Vec<_> = Power::ALL.iter().map(|p| p.code()).collect();
        assert_eq!(codes, ["AUS", "ENG", "FRA", "GER", "ITA", "RUS", "TUR"]);
        for (i, p) in Power::ALL.iter().enumerate() {
            assert_eq!(p.index(), i);
        }
    }

    #[test]
    fn parses_names_and_codes() {
        assert_eq!("England".parse::<Power>().unwrap(), Power::Eng);
        assert_eq!("tur".parse::<Power>().unwrap(), Power::Tur);
        assert_eq!(Power::from_name("German"), Some(Power::Ger));
        assert!("Prussia".parse::<Power>().is_err());
    }
}
