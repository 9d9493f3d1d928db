//! Exact mathematics of the restricted two-player, two-strategy game.
//!
//! Each player either leaves their side of an entangled pair alone (the
//! identity) or exchanges the labels `O` and `T` on it (the spin flip).
//! Alice plays the identity with probability `p`, Bob with probability `q`,
//! and the pair starts in `a|OO> + b|TT>`. Only the squared modulus `|a|^2`
//! enters any quantity below, so that is all [`EntangledState`] stores.
//!
//! With `K = alpha + beta - 2 gamma`, Alice's expected payoff is affine in `p`
//! with slope `c_A(q) = qK - alpha |b|^2 - beta |a|^2 + gamma`, and Bob's is
//! affine in `q` with slope `c_B(p) = pK - alpha |a|^2 - beta |b|^2 + gamma`.
//! Best responses are read off the sign of those slopes.

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Absolute tolerance on a best-response slope below which the player is
/// treated as indifferent.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// The three-parameter bimatrix
///
/// ```text
///              Bob: O            Bob: T
/// Alice: O   (alpha, beta)     (gamma, gamma)
/// Alice: T   (gamma, gamma)    (beta, alpha)
/// ```
///
/// which is the Battle of the Sexes when `alpha > beta > gamma`. Any finite
/// values are accepted; [`PayoffMatrix::is_bos`] labels the ones that are not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPayoffs")]
pub struct PayoffMatrix {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

#[derive(Deserialize)]
struct RawPayoffs {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl TryFrom<RawPayoffs> for PayoffMatrix {
    type Error = Error;

    fn try_from(raw: RawPayoffs) -> Result<Self> {
        PayoffMatrix::new(raw.alpha, raw.beta, raw.gamma)
    }
}

impl PayoffMatrix {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// The payoffs used throughout the examples and tests: (5, 3, 1).
    pub fn standard_bos() -> Self {
        Self { alpha: 5.0, beta: 3.0, gamma: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `alpha > beta > gamma`.
    pub fn is_bos(&self) -> bool {
        self.alpha > self.beta && self.beta > self.gamma
    }

    /// `alpha + beta - 2 gamma`: the `pq` coefficient of both payoff surfaces.
    pub fn interaction(&self) -> f64 {
        self.alpha + self.beta - 2.0 * self.gamma
    }

    /// Payoff pair for a definite measurement outcome.
    pub fn payoff(&self, outcome: Outcome) -> PayoffPair {
        match outcome {
            Outcome::OO => PayoffPair::new(self.alpha, self.beta),
            Outcome::TT => PayoffPair::new(self.beta, self.alpha),
            Outcome::OT | Outcome::TO => PayoffPair::new(self.gamma, self.gamma),
        }
    }
}

/// Initial state `a|OO> + b|TT>`, represented by `|a|^2` alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct EntangledState {
    a_sq: f64,
}

#[derive(Deserialize)]
struct RawState {
    a_sq: f64,
}

impl TryFrom<RawState> for EntangledState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        EntangledState::new(raw.a_sq)
    }
}

impl EntangledState {
    pub fn new(a_sq: f64) -> Result<Self> {
        Ok(Self { a_sq: check_probability("a_sq", a_sq)? })
    }

    /// The factorizable start `|OO>` (`a = 1`, `b = 0`).
    pub fn product() -> Self {
        Self { a_sq: 1.0 }
    }

    pub fn a_sq(&self) -> f64 {
        self.a_sq
    }

    pub fn b_sq(&self) -> f64 {
        1.0 - self.a_sq
    }
}

/// `(p, q)`: the probabilities with which Alice and Bob apply the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct StrategyProfile {
    p: f64,
    q: f64,
}

#[derive(Deserialize)]
struct RawProfile {
    p: f64,
    q: f64,
}

impl TryFrom<RawProfile> for StrategyProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        StrategyProfile::new(raw.p, raw.q)
    }
}

impl StrategyProfile {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Ok(Self { p: check_probability("p", p)?, q: check_probability("q", q)? })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The same profile seen from the other seat.
    pub fn swapped(&self) -> Self {
        Self { p: self.q, q: self.p }
    }
}

/// One side's label after measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    O,
    T,
}

impl Label {
    pub fn exchanged(self) -> Self {
        match self {
            Label::O => Label::T,
            Label::T => Label::O,
        }
    }
}

/// Raw measurement branch before any label exchange. Branch `A` has
/// probability `|a|^2` and reads `(O, O)` on an unflipped board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    A,
    B,
}

/// Measured pair `(Alice's label, Bob's label)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    OO,
    OT,
    TO,
    TT,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::OO, Outcome::OT, Outcome::TO, Outcome::TT];

    pub fn from_labels(alice: Label, bob: Label) -> Self {
        match (alice, bob) {
            (Label::O, Label::O) => Outcome::OO,
            (Label::O, Label::T) => Outcome::OT,
            (Label::T, Label::O) => Outcome::TO,
            (Label::T, Label::T) => Outcome::TT,
        }
    }

    /// Applies each player's label exchange to the raw branch.
    pub fn from_branch(branch: Branch, flip_alice: bool, flip_bob: bool) -> Self {
        let raw = match branch {
            Branch::A => Outcome::OO,
            Branch::B => Outcome::TT,
        };
        raw.relabel(flip_alice, flip_bob)
    }

    pub fn alice(self) -> Label {
        match self {
            Outcome::OO | Outcome::OT => Label::O,
            Outcome::TO | Outcome::TT => Label::T,
        }
    }

    pub fn bob(self) -> Label {
        match self {
            Outcome::OO | Outcome::TO => Label::O,
            Outcome::OT | Outcome::TT => Label::T,
        }
    }

    pub fn relabel(self, flip_alice: bool, flip_bob: bool) -> Self {
        let a = if flip_alice { self.alice().exchanged() } else { self.alice() };
        let b = if flip_bob { self.bob().exchanged() } else { self.bob() };
        Outcome::from_labels(a, b)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::OO => "OO",
            Outcome::OT => "OT",
            Outcome::TO => "TO",
            Outcome::TT => "TT",
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Probabilities of the four outcomes, indexed by [`Outcome::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    probs: [f64; 4],
}

impl OutcomeDistribution {
    pub fn get(&self, outcome: Outcome) -> f64 {
        self.probs[outcome.index()]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Bimatrix-weighted expectation over the four outcomes.
    pub fn expected_payoffs(&self, payoffs: &PayoffMatrix) -> PayoffPair {
        Outcome::ALL.iter().fold(PayoffPair::new(0.0, 0.0), |acc, &o| {
            let pay = payoffs.payoff(o);
            let w = self.get(o);
            PayoffPair::new(acc.alice + w * pay.alice, acc.bob + w * pay.bob)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffPair {
    pub alice: f64,
    pub bob: f64,
}

impl PayoffPair {
    pub fn new(alice: f64, bob: f64) -> Self {
        Self { alice, bob }
    }
}

/// Distribution of measured pairs once both players have (randomly) chosen
/// between identity and flip.
pub fn outcome_distribution(profile: StrategyProfile, state: EntangledState) -> OutcomeDistribution {
    let (p, q) = (profile.p, profile.q);
    let (a, b) = (state.a_sq(), state.b_sq());
    let keep_keep = p * q;
    let keep_flip = p * (1.0 - q);
    let flip_keep = (1.0 - p) * q;
    let flip_flip = (1.0 - p) * (1.0 - q);

    let mut probs = [0.0; 4];
    probs[Outcome::OO.index()] = keep_keep * a + flip_flip * b;
    probs[Outcome::TT.index()] = keep_keep * b + flip_flip * a;
    probs[Outcome::TO.index()] = flip_keep * a + keep_flip * b;
    probs[Outcome::OT.index()] = keep_flip * a + flip_keep * b;
    OutcomeDistribution { probs }
}

/// Closed-form expected payoffs, written in the factored form
/// `p c_A(q) + q(...) + ...` for Alice and `q c_B(p) + p(...) + ...` for Bob.
pub fn expected_payoffs(profile: StrategyProfile, state: EntangledState, payoffs: &PayoffMatrix) -> PayoffPair {
    let (p, q) = (profile.p, profile.q);
    let (a, b) = (state.a_sq(), state.b_sq());
    let (alpha, beta, gamma) = (payoffs.alpha, payoffs.beta, payoffs.gamma);

    let alice_offset = -alpha * b - beta * a + gamma;
    let alice = p * alice_slope(q, state, payoffs) + q * alice_offset + alpha * b + beta * a;

    let bob_offset = -alpha * a - beta * b + gamma;
    let bob = q * bob_slope(p, state, payoffs) + p * bob_offset + alpha * a + beta * b;

    PayoffPair::new(alice, bob)
}

/// Expected payoffs for the factorizable start `|OO>`.
///
/// This is the `|a|^2 = 1` limit of [`expected_payoffs`]. Alice's side reads
/// `p[qK + gamma - beta] + q(gamma - beta) + beta`; Bob's side is
/// `q[pK - alpha + gamma] + p(gamma - alpha) + alpha`. Note the
/// `p(gamma - alpha)` term for Bob: some printed versions of this limit show
/// `p(gamma - beta)` together with leftover `|a|^2`, `|b|^2` symbols, which does
/// not follow from the general formula and is not used here.
pub fn expected_payoffs_nonentangled(profile: StrategyProfile, payoffs: &PayoffMatrix) -> PayoffPair {
    expected_payoffs(profile, EntangledState::product(), payoffs)
}

/// `c_A(q)`: the slope of Alice's expected payoff in `p`.
pub fn alice_slope(q: f64, state: EntangledState, payoffs: &PayoffMatrix) -> f64 {
    q * payoffs.interaction() - payoffs.alpha * state.b_sq() - payoffs.beta * state.a_sq() + payoffs.gamma
}

/// `c_B(p)`: the slope of Bob's expected payoff in `q`.
pub fn bob_slope(p: f64, state: EntangledState, payoffs: &PayoffMatrix) -> f64 {
    p * payoffs.interaction() - payoffs.alpha * state.a_sq() - payoffs.beta * state.b_sq() + payoffs.gamma
}

/// Best-response set of one player: `{1}` (always identity), `{0}` (always
/// flip), or the whole interval `[0, 1]` when the payoff is flat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BestResponse {
    Identity,
    Flip,
    Indifferent,
}

impl BestResponse {
    pub fn from_slope(slope: f64) -> Self {
        if slope > TIE_TOLERANCE {
            BestResponse::Identity
        } else if slope < -TIE_TOLERANCE {
            BestResponse::Flip
        } else {
            BestResponse::Indifferent
        }
    }

    /// Whether the identity probability `x` is a best response.
    pub fn contains(&self, x: f64) -> bool {
        match self {
            BestResponse::Identity => x == 1.0,
            BestResponse::Flip => x == 0.0,
            BestResponse::Indifferent => (0.0..=1.0).contains(&x),
        }
    }

    /// `(lo, hi)` of the best-response set.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            BestResponse::Identity => (1.0, 1.0),
            BestResponse::Flip => (0.0, 0.0),
            BestResponse::Indifferent => (0.0, 1.0),
        }
    }
}

impl std::fmt::Display for BestResponse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BestResponse::Identity => f.write_str("{1}"),
            BestResponse::Flip => f.write_str("{0}"),
            BestResponse::Indifferent => f.write_str("[0,1]"),
        }
    }
}

pub fn best_response_alice(q: f64, state: EntangledState, payoffs: &PayoffMatrix) -> Result<BestResponse> {
    let q = check_probability("q", q)?;
    Ok(BestResponse::from_slope(alice_slope(q, state, payoffs)))
}

pub fn best_response_bob(p: f64, state: EntangledState, payoffs: &PayoffMatrix) -> Result<BestResponse> {
    let p = check_probability("p", p)?;
    Ok(BestResponse::from_slope(bob_slope(p, state, payoffs)))
}
