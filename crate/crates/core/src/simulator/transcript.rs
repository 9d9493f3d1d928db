//! Audit record of a single measurement.
//!
//! JSON shape (one flat object, every key always present):
//!
//! ```json
//! {"backend":"machine","outcome":"OO","charge_fraction":0.8,"digits":null,"draws_used":1,"tie_break":false}
//! {"backend":"cards","outcome":"TT","charge_fraction":null,"digits":[5,7],"draws_used":2,"tie_break":false}
//! ```
//!
//! `outcome` is `"OO"|"OT"|"TO"|"TT"` for game measurements, `"up"|"down"`
//! for the single sphere, and `"A"|"B"` for a raw card measurement.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Machine,
    Cards,
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "machine" => Ok(Backend::Machine),
            "cards" => Ok(Backend::Cards),
            other => Err(format!("unknown backend '{other}' (expected machine or cards)")),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Machine => "machine",
            Backend::Cards => "cards",
        })
    }
}

/// Randomness consumed by a measurement.
#[derive(Debug, Clone, PartialEq)]
pub enum Draws {
    /// The normalized charge `u1 = q1 / Q`.
    ChargeFraction(f64),
    /// Card digits in drawing order.
    Digits(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementTranscript<O> {
    pub outcome: O,
    pub draws: Draws,
    /// Set when the card procedure hit its digit budget undecided and the
    /// outcome was assigned to branch B.
    pub tie_break: bool,
}

impl<O> MeasurementTranscript<O> {
    pub fn machine(outcome: O, charge_fraction: f64) -> Self {
        Self { outcome, draws: Draws::ChargeFraction(charge_fraction), tie_break: false }
    }

    pub fn cards(outcome: O, digits: Vec<u8>, tie_break: bool) -> Self {
        Self { outcome, draws: Draws::Digits(digits), tie_break }
    }

    pub fn backend(&self) -> Backend {
        match self.draws {
            Draws::ChargeFraction(_) => Backend::Machine,
            Draws::Digits(_) => Backend::Cards,
        }
    }

    pub fn draws_used(&self) -> usize {
        match &self.draws {
            Draws::ChargeFraction(_) => 1,
            Draws::Digits(d) => d.len(),
        }
    }

    pub fn charge_fraction(&self) -> Option<f64> {
        match self.draws {
            Draws::ChargeFraction(u) => Some(u),
            Draws::Digits(_) => None,
        }
    }

    pub fn digits(&self) -> Option<&[u8]> {
        match &self.draws {
            Draws::ChargeFraction(_) => None,
            Draws::Digits(d) => Some(d),
        }
    }

    pub fn map<P>(self, f: impl FnOnce(O) -> P) -> MeasurementTranscript<P> {
        MeasurementTranscript { outcome: f(self.outcome), draws: self.draws, tie_break: self.tie_break }
    }
}

#[derive(Serialize, Deserialize)]
struct FlatRecord<O> {
    backend: Backend,
    outcome: O,
    charge_fraction: Option<f64>,
    digits: Option<Vec<u8>>,
    draws_used: usize,
    tie_break: bool,
}

impl<O: Serialize + Clone> Serialize for MeasurementTranscript<O> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FlatRecord {
            backend: self.backend(),
            outcome: self.outcome.clone(),
            charge_fraction: self.charge_fraction(),
            digits: self.digits().map(<[u8]>::to_vec),
            draws_used: self.draws_used(),
            tie_break: self.tie_break,
        }
        .serialize(serializer)
    }
}

impl<'de, O: Deserialize<'de>> Deserialize<'de> for MeasurementTranscript<O> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let flat = FlatRecord::<O>::deserialize(deserializer)?;
        let draws = match (flat.backend, flat.charge_fraction, flat.digits) {
            (Backend::Machine, Some(u), None) => {
                if flat.draws_used != 1 {
                    return Err(D::Error::custom("machine transcript must report draws_used = 1"));
                }
                Draws::ChargeFraction(u)
            }
            (Backend::Cards, None, Some(d)) => {
                if d.is_empty() || d.len() != flat.draws_used || d.iter().any(|&x| x > 9) {
                    return Err(D::Error::custom("card transcript digits inconsistent with draws_used"));
                }
                Draws::Digits(d)
            }
            _ => return Err(D::Error::custom("charge_fraction must be present iff backend = machine")),
        };
        if flat.tie_break && flat.backend == Backend::Machine {
            return Err(D::Error::custom("tie_break is only defined for the cards backend"));
        }
        Ok(MeasurementTranscript { outcome: flat.outcome, draws, tie_break: flat.tie_break })
    }
}
