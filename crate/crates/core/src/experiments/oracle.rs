//! Brute-force equilibrium search on a `(p, q)` grid.
//!
//! The oracle never looks at best-response slopes. It evaluates both payoff
//! surfaces by enumerating the four flip configurations and two measurement
//! branches, then:
//!
//! * flags a grid point when neither player gains more than `1e-9` by any
//!   grid deviation;
//! * flags a grid square when, along both of its edges, each player's grid
//!   best responses switch across the square (so an off-grid indifference
//!   point lies inside it, e.g. `(2/3, 1/3)` on a 0.01 grid).

use serde::{Deserialize, Serialize};

use crate::equilibria::{nash_equilibria, Equilibrium};
use crate::error::{Error, Result};
use crate::game::{Branch, EntangledState, Outcome, PayoffMatrix, PayoffPair};

/// Largest gain from a grid deviation that still counts as no gain.
pub const DEVIATION_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellShape {
    Point,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleCell {
    pub shape: CellShape,
    /// Grid indices of the point, or of the square's lower-left corner.
    pub i: usize,
    pub j: usize,
    /// Location: the point itself or the square's center.
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumGridReport {
    /// Grid spacing actually used (`1 / n` for the smallest `n` with `1/n <= step`).
    pub step: f64,
    pub cells: Vec<OracleCell>,
    pub closed_form: Vec<Equilibrium>,
    /// Indices into `closed_form` with no oracle cell within one step.
    pub unmatched_closed_form: Vec<usize>,
    /// Indices into `cells` farther than one step from every closed-form set.
    pub unmatched_cells: Vec<usize>,
}

impl EquilibriumGridReport {
    pub fn agrees(&self) -> bool {
        self.unmatched_closed_form.is_empty() && self.unmatched_cells.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &OracleCell> {
        self.cells.iter().filter(|c| c.shape == CellShape::Point)
    }
}

/// Expected payoffs by direct enumeration over flips and branches.
pub fn grid_payoffs(p: f64, q: f64, state: EntangledState, payoffs: &PayoffMatrix) -> PayoffPair {
    let mut alice = 0.0;
    let mut bob = 0.0;
    for (flip_a, wa) in [(false, p), (true, 1.0 - p)] {
        for (flip_b, wb) in [(false, q), (true, 1.0 - q)] {
            for (branch, wbr) in [(Branch::A, state.a_sq()), (Branch::B, state.b_sq())] {
                let w = wa * wb * wbr;
                let pay = payoffs.payoff(Outcome::from_branch(branch, flip_a, flip_b));
                alice += w * pay.alice;
                bob += w * pay.bob;
            }
        }
    }
    PayoffPair::new(alice, bob)
}

/// (min, max) grid index of a best-response set given as a predicate over indices.
fn extent(n: usize, mut is_best: impl FnMut(usize) -> bool) -> (usize, usize) {
    let members: Vec<usize> = (0..=n).filter(|&k| is_best(k)).collect();
    (*members.first().expect("non-empty"), *members.last().expect("non-empty"))
}

pub fn equilibrium_oracle_grid(state: EntangledState, payoffs: &PayoffMatrix, step: f64) -> Result<EquilibriumGridReport> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::domain(format!("grid step must lie in (0, 0.1], got {step}")));
    }
    let n = (1.0 / step - 1e-9).ceil() as usize;
    let h = 1.0 / n as f64;
    let coord = |k: usize| k as f64 / n as f64;

    // table[i][j] = payoffs at (p_i, q_j)
    let table: Vec<Vec<PayoffPair>> =
        (0..=n).map(|i| (0..=n).map(|j| grid_payoffs(coord(i), coord(j), state, payoffs)).collect()).collect();

    let best_alice: Vec<f64> =
        (0..=n).map(|j| (0..=n).map(|i| table[i][j].alice).fold(f64::NEG_INFINITY, f64::max)).collect();
    let best_bob: Vec<f64> =
        (0..=n).map(|i| (0..=n).map(|j| table[i][j].bob).fold(f64::NEG_INFINITY, f64::max)).collect();
    let alice_ok = |i: usize, j: usize| best_alice[j] - table[i][j].alice <= DEVIATION_EPSILON;
    let bob_ok = |i: usize, j: usize| best_bob[i] - table[i][j].bob <= DEVIATION_EPSILON;

    let mut cells = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if alice_ok(i, j) && bob_ok(i, j) {
                cells.push(OracleCell { shape: CellShape::Point, i, j, p: coord(i), q: coord(j) });
            }
        }
    }

    let alice_extent: Vec<(usize, usize)> = (0..=n).map(|j| extent(n, |i| alice_ok(i, j))).collect();
    let bob_extent: Vec<(usize, usize)> = (0..=n).map(|i| extent(n, |j| bob_ok(i, j))).collect();
    for i in 0..n {
        for j in 0..n {
            let (a_lo, a_hi) = (alice_extent[j].0.min(alice_extent[j + 1].0), alice_extent[j].1.max(alice_extent[j + 1].1));
            let (b_lo, b_hi) = (bob_extent[i].0.min(bob_extent[i + 1].0), bob_extent[i].1.max(bob_extent[i + 1].1));
            let alice_switches = a_lo <= i && a_hi > i;
            let bob_switches = b_lo <= j && b_hi > j;
            if alice_switches && bob_switches {
                cells.push(OracleCell {
                    shape: CellShape::Square,
                    i,
                    j,
                    p: coord(i) + 0.5 * h,
                    q: coord(j) + 0.5 * h,
                });
            }
        }
    }

    let closed_form = nash_equilibria(state, payoffs);
    let reach = h * (1.0 + 1e-9);

    let unmatched_closed_form = closed_form
        .iter()
        .enumerate()
        .filter(|(_, eq)| {
            let probes = [(eq.p.lo, eq.q.lo), (eq.p.hi, eq.q.hi), (eq.profile.p(), eq.profile.q())];
            !probes.iter().all(|&(p, q)| cells.iter().any(|c| (c.p - p).abs().max((c.q - q).abs()) <= reach))
        })
        .map(|(k, _)| k)
        .collect();

    let unmatched_cells = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| !closed_form.iter().any(|eq| eq.distance(c.p, c.q) <= reach))
        .map(|(k, _)| k)
        .collect();

    Ok(EquilibriumGridReport { step: h, cells, closed_form, unmatched_closed_form, unmatched_cells })
}
