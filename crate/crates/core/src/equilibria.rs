//! Nash equilibria of the bilinear restricted game.
//!
//! Each player's best-response graph is a union of at most three closed
//! axis-aligned rectangles in the `(p, q)` square: "identity" where the slope
//! is positive, "flip" where it is negative, and a full strip where the slope
//! vanishes. The equilibrium set is the union of the pairwise intersections
//! of Alice's pieces with Bob's. Points at corners are pure equilibria,
//! interior points are mixed, and anything with extent is a flat component
//! (degenerate games only).

use serde::{Deserialize, Serialize};

use crate::game::{
    alice_slope, best_response_alice, best_response_bob, bob_slope, expected_payoffs, EntangledState, PayoffMatrix,
    PayoffPair, StrategyProfile, TIE_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Pure,
    Mixed,
    Component,
}

/// Closed interval `[lo, hi]` of identity probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    const UNIT: Span = Span { lo: 0.0, hi: 1.0 };

    fn point(x: f64) -> Self {
        Span { lo: x, hi: x }
    }

    fn intersect(self, other: Span) -> Option<Span> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Span { lo, hi })
    }

    fn contains_span(&self, other: &Span) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Distance from `x` to the interval.
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

/// A connected set of mutual best responses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub p: Span,
    pub q: Span,
    /// The point itself, or the midpoint of a component.
    pub profile: StrategyProfile,
    /// Expected payoffs at `profile`.
    pub payoffs: PayoffPair,
}

impl Equilibrium {
    /// Chebyshev distance from `(p, q)` to this equilibrium set.
    pub fn distance(&self, p: f64, q: f64) -> f64 {
        self.p.distance(p).max(self.q.distance(q))
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    p: Span,
    q: Span,
}

/// Closed subsets of `[0,1]` where an affine slope `k x + m` is positive,
/// negative, or zero.
struct SignSets {
    positive: Option<Span>,
    negative: Option<Span>,
    zero: Option<Span>,
}

fn sign_sets(k: f64, m: f64) -> SignSets {
    let constant = |c: f64| {
        if c > TIE_TOLERANCE {
            SignSets { positive: Some(Span::UNIT), negative: None, zero: None }
        } else if c < -TIE_TOLERANCE {
            SignSets { positive: None, negative: Some(Span::UNIT), zero: None }
        } else {
            SignSets { positive: None, negative: None, zero: Some(Span::UNIT) }
        }
    };
    if k.abs() <= TIE_TOLERANCE {
        return constant(m);
    }
    let mut root = -m / k;
    // Pull roots that are outside [0,1] only by the tie tolerance back onto the
    // boundary so they agree with the tolerant best-response test.
    let slack = TIE_TOLERANCE / k.abs();
    if (-slack..0.0).contains(&root) {
        root = 0.0;
    } else if root > 1.0 && root <= 1.0 + slack {
        root = 1.0;
    }
    if root < 0.0 {
        return constant(k);
    }
    if root > 1.0 {
        return constant(-k);
    }
    let above = Span { lo: root, hi: 1.0 };
    let below = Span { lo: 0.0, hi: root };
    let (positive, negative) = if k > 0.0 { (above, below) } else { (below, above) };
    SignSets { positive: Some(positive), negative: Some(negative), zero: Some(Span::point(root)) }
}

/// All mutual-best-response sets of the game.
///
/// The generic BoS instance yields the two pure equilibria `(1,1)`, `(0,0)`
/// and the mixed point
/// `p* = (alpha|a|^2 + beta|b|^2 - gamma)/K`, `q* = (alpha|b|^2 + beta|a|^2 - gamma)/K`
/// whenever both land in `[0,1]`.
pub fn nash_equilibria(state: EntangledState, payoffs: &PayoffMatrix) -> Vec<Equilibrium> {
    let k = payoffs.interaction();
    // Alice's slope as a function of q, Bob's as a function of p.
    let alice = sign_sets(k, alice_slope(0.0, state, payoffs));
    let bob = sign_sets(k, bob_slope(0.0, state, payoffs));

    let mut alice_pieces = Vec::new();
    if let Some(qs) = alice.positive {
        alice_pieces.push(Rect { p: Span::point(1.0), q: qs });
    }
    if let Some(qs) = alice.negative {
        alice_pieces.push(Rect { p: Span::point(0.0), q: qs });
    }
    if let Some(qs) = alice.zero {
        alice_pieces.push(Rect { p: Span::UNIT, q: qs });
    }

    let mut bob_pieces = Vec::new();
    if let Some(ps) = bob.positive {
        bob_pieces.push(Rect { p: ps, q: Span::point(1.0) });
    }
    if let Some(ps) = bob.negative {
        bob_pieces.push(Rect { p: ps, q: Span::point(0.0) });
    }
    if let Some(ps) = bob.zero {
        bob_pieces.push(Rect { p: ps, q: Span::UNIT });
    }

    let mut rects: Vec<Rect> = Vec::new();
    for a in &alice_pieces {
        for b in &bob_pieces {
            if let (Some(p), Some(q)) = (a.p.intersect(b.p), a.q.intersect(b.q)) {
                rects.push(Rect { p, q });
            }
        }
    }

    // Drop pieces that are subsets of others (corner points on a component, duplicates).
    let mut kept: Vec<Rect> = Vec::new();
    for (i, r) in rects.iter().enumerate() {
        let covered = rects.iter().enumerate().any(|(j, other)| {
            j != i
                && other.p.contains_span(&r.p)
                && other.q.contains_span(&r.q)
                && (!(r.p.contains_span(&other.p) && r.q.contains_span(&other.q)) || j < i)
        });
        if !covered {
            kept.push(*r);
        }
    }

    let mut out: Vec<Equilibrium> = kept
        .into_iter()
        .filter_map(|r| {
            let profile = StrategyProfile::new(r.p.midpoint(), r.q.midpoint()).ok()?;
            let kind = if r.p.is_point() && r.q.is_point() {
                let corner = |x: f64| x == 0.0 || x == 1.0;
                if corner(r.p.lo) && corner(r.q.lo) {
                    EquilibriumKind::Pure
                } else {
                    EquilibriumKind::Mixed
                }
            } else {
                EquilibriumKind::Component
            };
            let payoffs = expected_payoffs(profile, state, payoffs);
            Some(Equilibrium { kind, p: r.p, q: r.q, profile, payoffs })
        })
        .collect();

    out.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then(b.p.lo.total_cmp(&a.p.lo))
            .then(b.q.lo.total_cmp(&a.q.lo))
    });
    out
}

/// Whether `profile` is a mutual best response, using the tolerant tests.
pub fn is_mutual_best_response(profile: StrategyProfile, state: EntangledState, payoffs: &PayoffMatrix) -> bool {
    let ba = best_response_alice(profile.q(), state, payoffs).expect("validated profile");
    let bb = best_response_bob(profile.p(), state, payoffs).expect("validated profile");
    ba.contains(profile.p()) && bb.contains(profile.q())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(eqs: &[Equilibrium], p: f64, q: f64) -> Option<&Equilibrium> {
        eqs.iter().find(|e| e.distance(p, q) < 1e-12)
    }

    #[test]
    fn classical_bos() {
        let bos = PayoffMatrix::standard_bos();
        let eqs = nash_equilibria(EntangledState::product(), &bos);
        assert_eq!(eqs.len(), 3, "{eqs:?}");

        let e = find(&eqs, 1.0, 1.0).unwrap();
        assert_eq!(e.kind, EquilibriumKind::Pure);
        assert_eq!(e.payoffs, PayoffPair::new(5.0, 3.0));

        let e = find(&eqs, 0.0, 0.0).unwrap();
        assert_eq!(e.kind, EquilibriumKind::Pure);
        assert_eq!(e.payoffs, PayoffPair::new(3.0, 5.0));

        let e = find(&eqs, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        assert_eq!(e.kind, EquilibriumKind::Mixed);
        assert!((e.payoffs.alice - 7.0 / 3.0).abs() < 1e-12);
        assert!((e.payoffs.bob - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn half_entangled_center() {
        let bos = PayoffMatrix::standard_bos();
        let eqs = nash_equilibria(EntangledState::new(0.5).unwrap(), &bos);
        let e = find(&eqs, 0.5, 0.5).unwrap();
        assert_eq!(e.kind, EquilibriumKind::Mixed);
        assert!((e.payoffs.alice - 2.5).abs() < 1e-12 && (e.payoffs.bob - 2.5).abs() < 1e-12);
    }

    #[test]
    fn constant_game_is_one_component() {
        let flat = PayoffMatrix::new(2.0, 2.0, 2.0).unwrap();
        let eqs = nash_equilibria(EntangledState::new(0.5).unwrap(), &flat);
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].kind, EquilibriumKind::Component);
        assert_eq!(eqs[0].p, Span::UNIT);
        assert_eq!(eqs[0].q, Span::UNIT);
        assert_eq!(eqs[0].payoffs, PayoffPair::new(2.0, 2.0));
    }

    #[test]
    fn degenerate_interaction_without_indifference() {
        // alpha + beta = 2 gamma, slopes constant and nonzero
        let m = PayoffMatrix::new(3.0, 1.0, 2.0).unwrap();
        let st = EntangledState::new(0.25).unwrap();
        let eqs = nash_equilibria(st, &m);
        assert!(!eqs.is_empty());
        for e in &eqs {
            assert!(is_mutual_best_response(e.profile, st, &m));
        }
    }

    #[test]
    fn edge_component_when_one_player_indifferent_at_boundary() {
        // (1, 3, 1) at a_sq = 1: c_A(q) = 2q - 2 vanishes at q = 1 and c_B(p) = 2p at p = 0,
        // so both edges p = 0 and q = 1 are flat components.
        let m = PayoffMatrix::new(1.0, 3.0, 1.0).unwrap();
        let st = EntangledState::product();
        let eqs = nash_equilibria(st, &m);
        for e in &eqs {
            assert!(is_mutual_best_response(e.profile, st, &m), "{e:?}");
            for (p, q) in [(e.p.lo, e.q.lo), (e.p.hi, e.q.hi)] {
                assert!(is_mutual_best_response(StrategyProfile::new(p, q).unwrap(), st, &m), "{e:?}");
            }
        }
        assert!(eqs.iter().any(|e| e.kind == EquilibriumKind::Component), "{eqs:?}");
    }
}
