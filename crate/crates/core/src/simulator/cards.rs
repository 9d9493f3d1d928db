//! The 10-card measurement.
//!
//! Cards numbered 0..9 are drawn one at a time (with replacement) to build a
//! uniform number `0.d1 d2 d3 ...` digit by digit. After `k` cards the number
//! is only known to lie in `[lo, lo + 10^-k)`; drawing stops as soon as that
//! interval sits entirely below `|a|^2` (branch A, `hi <= |a|^2`) or entirely
//! at or above it (branch B, `lo >= |a|^2`).
//!
//! `|a|^2` is read as its shortest decimal representation (`0.55` is the
//! decimal 0.55, not the nearest binary double), so the stopping rule reduces
//! to a digit-by-digit comparison: a smaller digit decides A, a larger one
//! decides B, and an equal digit decides B only when no nonzero target digits
//! remain. A value with a `k`-digit expansion therefore stops within `k` draws.

use serde::{Deserialize, Serialize};

use super::rng::Randomness;
use super::transcript::MeasurementTranscript;
use crate::error::{Error, Result};
use crate::game::{Branch, EntangledState, Outcome};

pub const DEFAULT_MAX_DIGITS: usize = 16;
pub const MAX_DIGITS_LIMIT: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CardStatus {
    Pending,
    Decided { branch: Branch, tie_break: bool },
}

/// Incremental state of one card measurement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardDraw {
    /// Decimal digits of `|a|^2` after the point, trailing zeros removed.
    /// `None` stands for `|a|^2 = 1`.
    target: Option<Vec<u8>>,
    drawn: Vec<u8>,
    max_digits: usize,
    status: CardStatus,
}

fn decimal_digits(a_sq: f64) -> Option<Vec<u8>> {
    if a_sq >= 1.0 {
        return None;
    }
    // Display for f64 is the shortest round-trip decimal and never uses exponents.
    let text = format!("{a_sq}");
    let frac = text.split_once('.').map_or("", |(_, f)| f);
    let mut digits: Vec<u8> = frac.bytes().map(|b| b - b'0').collect();
    while digits.last() == Some(&0) {
        digits.pop();
    }
    Some(digits)
}

impl CardDraw {
    pub fn new(state: EntangledState, max_digits: usize) -> Result<Self> {
        if !(1..=MAX_DIGITS_LIMIT).contains(&max_digits) {
            return Err(Error::domain(format!("max_digits must lie in 1..={MAX_DIGITS_LIMIT}, got {max_digits}")));
        }
        Ok(Self { target: decimal_digits(state.a_sq()), drawn: Vec::new(), max_digits, status: CardStatus::Pending })
    }

    pub fn status(&self) -> CardStatus {
        self.status
    }

    pub fn digits(&self) -> &[u8] {
        &self.drawn
    }

    pub fn max_digits(&self) -> usize {
        self.max_digits
    }

    /// Adds one card and returns the updated status.
    pub fn push(&mut self, digit: u8) -> Result<CardStatus> {
        if digit > 9 {
            return Err(Error::domain(format!("card digit must be 0..=9, got {digit}")));
        }
        if self.status != CardStatus::Pending {
            return Err(Error::domain("card measurement already decided"));
        }
        let i = self.drawn.len();
        self.drawn.push(digit);

        let decided = match &self.target {
            None => Some(Branch::A),
            Some(target) => {
                let t = target.get(i).copied().unwrap_or(0);
                if digit < t {
                    Some(Branch::A)
                } else if digit > t || target.len() <= i + 1 {
                    Some(Branch::B)
                } else {
                    None
                }
            }
        };
        self.status = match decided {
            Some(branch) => CardStatus::Decided { branch, tie_break: false },
            None if self.drawn.len() >= self.max_digits => CardStatus::Decided { branch: Branch::B, tie_break: true },
            None => CardStatus::Pending,
        };
        Ok(self.status)
    }

    /// Lower end of the current interval as an exact decimal string.
    pub fn lo_decimal(&self) -> String {
        if self.drawn.is_empty() {
            return "0".to_string();
        }
        let mut s = String::from("0.");
        s.extend(self.drawn.iter().map(|d| char::from(b'0' + d)));
        s
    }

    /// Upper (excluded) end of the current interval as an exact decimal string.
    pub fn hi_decimal(&self) -> String {
        let mut digits = self.drawn.clone();
        // add one unit in the last place
        let mut carry = true;
        for d in digits.iter_mut().rev() {
            if *d == 9 {
                *d = 0;
            } else {
                *d += 1;
                carry = false;
                break;
            }
        }
        if carry {
            return "1".to_string();
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        let mut s = String::from("0.");
        s.extend(digits.iter().map(|d| char::from(b'0' + d)));
        s
    }

    pub fn lo(&self) -> f64 {
        self.lo_decimal().parse().expect("decimal literal")
    }

    pub fn hi(&self) -> f64 {
        self.hi_decimal().parse().expect("decimal literal")
    }

    /// Transcript of a decided draw, `None` while still pending.
    pub fn transcript(&self) -> Option<MeasurementTranscript<Branch>> {
        match self.status {
            CardStatus::Pending => None,
            CardStatus::Decided { branch, tie_break } => {
                Some(MeasurementTranscript::cards(branch, self.drawn.clone(), tie_break))
            }
        }
    }
}

/// Draws cards until the interval is decided or `max_digits` is reached.
pub fn card_measurement(
    state: EntangledState,
    digits: &mut impl Randomness,
    max_digits: usize,
) -> Result<MeasurementTranscript<Branch>> {
    let mut draw = CardDraw::new(state, max_digits)?;
    while draw.push(digits.digit())? == CardStatus::Pending {}
    Ok(draw.transcript().expect("decided"))
}

/// Card measurement followed by each player's label exchange.
pub fn card_game_measurement(
    state: EntangledState,
    flip_alice: bool,
    flip_bob: bool,
    rng: &mut impl Randomness,
) -> MeasurementTranscript<Outcome> {
    card_measurement(state, rng, DEFAULT_MAX_DIGITS)
        .expect("default digit budget is valid")
        .map(|branch| Outcome::from_branch(branch, flip_alice, flip_bob))
}
