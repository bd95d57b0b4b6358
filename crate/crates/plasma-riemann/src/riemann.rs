//! Riemann data for the cold-plasma system in reduced form
//!
//! ```text
//! V_t + V V_x = -E,    E_t + V E_x = V,    n = 1 - E_x
//! ```
//!
//! Characteristics are rigid rotations in the (V, E) phase plane with period
//! 2*pi. Every Riemann datum alternates between a rarefaction phase and a
//! delta-shock phase; the switch happens at the critical time `T_*` where the
//! side characteristics emanating from the jump point meet again.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics;

/// Temporal period of the characteristic rotation.
pub const PERIOD: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error("initial density would be negative: [E]^0 = {jump_e} > 0")]
    PositivityViolation { jump_e: f64 },
    #[error("degenerate data: both jumps vanish")]
    DegenerateData,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// A two-state Riemann datum. `x0`/`t0` track where and when the jump sits,
/// so that per-phase data produced by `next_phase_data` stay well-defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    pub v_minus: f64,
    pub v_plus: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub t0: f64,
}

impl RiemannData {
    pub fn new(v_minus: f64, v_plus: f64, e_minus: f64, e_plus: f64) -> Self {
        Self {
            v_minus,
            v_plus,
            e_minus,
            e_plus,
            x0: 0.0,
            t0: 0.0,
        }
    }

    /// Velocity jump `[V]^0 = V_+^0 - V_-^0`.
    pub fn jump_v(&self) -> f64 {
        self.v_plus - self.v_minus
    }

    /// Field jump `[E]^0 = E_+^0 - E_-^0`.
    pub fn jump_e(&self) -> f64 {
        self.e_plus - self.e_minus
    }

    /// Validate entry data: the initial density `1 - [E]^0 delta` must be a
    /// nonnegative measure, and at least one jump must be present.
    ///
    /// Phase data produced internally by `next_phase_data` are NOT re-passed
    /// through this check: mid-period states may carry `[E] > 0` legitimately
    /// (the delta amplitude is controlled separately during shock phases).
    pub fn validate(self) -> Result<Self, ValidationError> {
        for (name, v) in [
            ("v_minus", self.v_minus),
            ("v_plus", self.v_plus),
            ("e_minus", self.e_minus),
            ("e_plus", self.e_plus),
        ] {
            if !v.is_finite() {
                return Err(ValidationError::InternalInconsistency(format!(
                    "non-finite field {name}"
                )));
            }
        }
        if self.jump_e() > 0.0 {
            return Err(ValidationError::PositivityViolation {
                jump_e: self.jump_e(),
            });
        }
        if self.jump_v() == 0.0 && self.jump_e() == 0.0 {
            return Err(ValidationError::DegenerateData);
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Exact state carried by the side characteristic at phase-local time `t`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SideState {
    pub t: f64,
    pub v: f64,
    pub e: f64,
    pub x: f64,
}

/// Closed-form rotation of a side state: the phase-plane point (V, E) rotates
/// rigidly while the foot point translates by the integrated velocity.
pub fn side_state(data: &RiemannData, side: Side, t: f64) -> SideState {
    let (v0, e0) = match side {
        Side::Left => (data.v_minus, data.e_minus),
        Side::Right => (data.v_plus, data.e_plus),
    };
    let (s, c) = t.sin_cos();
    SideState {
        t,
        v: -e0 * s + v0 * c,
        e: v0 * s + e0 * c,
        x: data.x0 + v0 * s + e0 * (c - 1.0),
    }
}

/// Gap between the side characteristics, `x_+(t) - x_-(t)`.
pub fn characteristic_gap(data: &RiemannData, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    data.jump_v() * s + data.jump_e() * (c - 1.0)
}

/// Jump `[V](t)` between the rotated side velocities.
pub fn jump_v_at(data: &RiemannData, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    -data.jump_e() * s + data.jump_v() * c
}

/// Jump `[E](t)` between the rotated side fields.
pub fn jump_e_at(data: &RiemannData, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    data.jump_v() * s + data.jump_e() * c
}

/// Critical constants of one phase.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CriticalTimes {
    /// Phase length `T_*`: first positive root of the characteristic gap.
    pub t_star: f64,
    /// Half time `t_* = T_*/2`, where the side velocities agree.
    pub t_half: f64,
    /// Common side velocity `U` at `t_half`.
    pub u_star: f64,
    /// Conserved jump `K = [V^2 + E^2]^0`.
    pub k_jump: f64,
}

/// Compute `T_*`, `t_*`, `U` and `K` in closed form, cross-validated against
/// an independent bisection on the characteristic gap. A disagreement above
/// 1e-8 is a hard error rather than a warning.
pub fn critical_times(data: &RiemannData) -> Result<CriticalTimes, ValidationError> {
    let jv = data.jump_v();
    let je = data.jump_e();
    if jv == 0.0 && je == 0.0 {
        return Err(ValidationError::DegenerateData);
    }

    let t_star = if jv == 0.0 {
        PERIOD
    } else {
        // tan(T/2) = [V]^0/[E]^0, branch chosen so T/2 lies in (0, pi].
        let mut half = (jv / je).atan();
        if half <= 0.0 {
            half += std::f64::consts::PI;
        }
        let t = 2.0 * half;

        // Independent check: bisection on the gap itself.
        let gap = |s: f64| characteristic_gap(data, s);
        let eps = 1e-6 * PERIOD;
        if t < PERIOD - eps {
            let bracket = bracket_first_root(&gap, eps, PERIOD - eps);
            if let Some((a, b)) = bracket {
                let root = numerics::find_root(&gap, a, b, 1e-13).map_err(|e| {
                    ValidationError::InternalInconsistency(format!(
                        "gap root refinement failed: {e}"
                    ))
                })?;
                if (root - t).abs() > 1e-8 {
                    return Err(ValidationError::InternalInconsistency(format!(
                        "closed-form T_* = {t} disagrees with bisection root {root}"
                    )));
                }
            } else {
                return Err(ValidationError::InternalInconsistency(
                    "no sign change found for characteristic gap".into(),
                ));
            }
        }
        t
    };

    let norm = jv.hypot(je);
    let u_star = (data.e_minus * data.v_plus - data.e_plus * data.v_minus) / norm;
    let k_jump = (data.v_plus * data.v_plus + data.e_plus * data.e_plus)
        - (data.v_minus * data.v_minus + data.e_minus * data.e_minus);

    Ok(CriticalTimes {
        t_star,
        t_half: 0.5 * t_star,
        u_star,
        k_jump,
    })
}

/// Scan for the first sign change of `f` on `[a, b]`.
fn bracket_first_root(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Option<(f64, f64)> {
    const N: usize = 4096;
    let mut lo = a;
    let mut f_lo = f(lo);
    for i in 1..=N {
        let hi = a + (b - a) * i as f64 / N as f64;
        let f_hi = f(hi);
        if f_lo * f_hi <= 0.0 {
            return Some((lo, hi));
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseKind {
    Rarefaction,
    Shock,
}

/// First-phase classification: the characteristics initially separate
/// (`[V]^0 > 0`, or `[V]^0 = 0` with a genuine delta) in a rarefaction,
/// and overlap (`[V]^0 < 0`) in a shock.
pub fn classify_first_phase(data: &RiemannData) -> PhaseKind {
    if data.jump_v() < 0.0 {
        PhaseKind::Shock
    } else {
        PhaseKind::Rarefaction
    }
}

/// States at the meeting time `T_*`, repackaged as the next phase's datum.
/// The meeting point becomes the new jump location.
pub fn next_phase_data(
    data: &RiemannData,
    times: &CriticalTimes,
) -> Result<RiemannData, ValidationError> {
    let left = side_state(data, Side::Left, times.t_star);
    let right = side_state(data, Side::Right, times.t_star);
    let scale = 1.0f64
        .max(data.v_minus.abs())
        .max(data.v_plus.abs())
        .max(data.e_minus.abs())
        .max(data.e_plus.abs());
    if (left.x - right.x).abs() > 1e-9 * scale {
        return Err(ValidationError::InternalInconsistency(format!(
            "side characteristics do not meet at T_*: x_- = {}, x_+ = {}",
            left.x, right.x
        )));
    }
    let next = RiemannData {
        v_minus: left.v,
        v_plus: right.v,
        e_minus: left.e,
        e_plus: right.e,
        x0: 0.5 * (left.x + right.x),
        t0: data.t0 + times.t_star,
    };
    if next.jump_v() == 0.0 && next.jump_e() == 0.0 {
        return Err(ValidationError::DegenerateData);
    }
    // Relaxed intra-period rule: a shock phase must open with a positive
    // delta amplitude e = -[E] > 0; the entry-data positivity check does not
    // apply to phase-internal states.
    if classify_first_phase(&next) == PhaseKind::Shock && -next.jump_e() <= 0.0 {
        return Err(ValidationError::InternalInconsistency(format!(
            "shock phase would open with nonpositive delta amplitude {}",
            -next.jump_e()
        )));
    }
    Ok(next)
}

/// One phase of the 2*pi-periodic solution.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Phase {
    pub kind: PhaseKind,
    /// Absolute start time (relative to the entry datum's clock).
    pub t_start: f64,
    /// Absolute end time.
    pub t_end: f64,
    /// Datum valid on this phase, with its own local clock starting at 0.
    pub data: RiemannData,
}

impl Phase {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Schedule of phases covering exactly one period.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhasePlan {
    pub phases: Vec<Phase>,
    pub period: f64,
}

/// Assemble the alternating rarefaction/shock schedule over one 2*pi period.
/// Phase durations add up to the period by construction (`T_*^(1) + T_*^(2)
/// = 2*pi`); the identity is still verified and failure is a hard error.
pub fn assemble_period(data: &RiemannData) -> Result<PhasePlan, ValidationError> {
    let first_times = critical_times(data)?;
    let mut phases = vec![Phase {
        kind: classify_first_phase(data),
        t_start: data.t0,
        t_end: data.t0 + first_times.t_star,
        data: *data,
    }];

    if first_times.t_star < PERIOD - 1e-12 {
        let second = next_phase_data(data, &first_times)?;
        let second_times = critical_times(&second)?;
        phases.push(Phase {
            kind: classify_first_phase(&second),
            t_start: second.t0,
            t_end: second.t0 + second_times.t_star,
            data: second,
        });
        let total = first_times.t_star + second_times.t_star;
        if (total - PERIOD).abs() > 1e-9 {
            return Err(ValidationError::InternalInconsistency(format!(
                "phase durations {} + {} do not sum to 2*pi",
                first_times.t_star, second_times.t_star
            )));
        }
        if phases[0].kind == phases[1].kind {
            return Err(ValidationError::InternalInconsistency(
                "phases of one period must alternate".into(),
            ));
        }
    }

    Ok(PhasePlan {
        phases,
        period: PERIOD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    /// Example datum with an opening shock phase: V = (1, 0), E = (0, -1).
    pub fn example_one() -> RiemannData {
        RiemannData::new(1.0, 0.0, 0.0, -1.0)
    }

    /// Example datum with a sign-changing shock speed: V = (1, 0.5), E = (1, 0.9).
    pub fn example_two() -> RiemannData {
        RiemannData::new(1.0, 0.5, 1.0, 0.9)
    }

    #[test]
    fn validation_rejects_bad_data() {
        assert!(matches!(
            RiemannData::new(0.0, 0.0, -1.0, 0.0).validate(),
            Err(ValidationError::PositivityViolation { .. })
        ));
        assert!(matches!(
            RiemannData::new(1.0, 1.0, 0.5, 0.5).validate(),
            Err(ValidationError::DegenerateData)
        ));
        assert!(example_one().validate().is_ok());
    }

    #[test]
    fn side_state_rotation_example_one() {
        // [PAPER] both characteristics of Example 1 arrive at x = 1 at t = pi/2.
        let d = example_one();
        let l = side_state(&d, Side::Left, FRAC_PI_2);
        let r = side_state(&d, Side::Right, FRAC_PI_2);
        assert!((l.v - 0.0).abs() < 1e-15);
        assert!((l.e - 1.0).abs() < 1e-15);
        assert!((l.x - 1.0).abs() < 1e-15);
        assert!((r.v - 1.0).abs() < 1e-15);
        assert!((r.e - 0.0).abs() < 1e-15);
        assert!((r.x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invariants_of_rotation() {
        // [TRIVIAL] V^2 + E^2 is conserved along characteristics; 2*pi periodic.
        let d = example_two();
        for side in [Side::Left, Side::Right] {
            let s0 = side_state(&d, side, 0.0);
            for &t in &[0.3, 1.7, 4.4] {
                let s = side_state(&d, side, t);
                let r0 = s0.v * s0.v + s0.e * s0.e;
                let r = s.v * s.v + s.e * s.e;
                assert!((r - r0).abs() < 1e-12);
            }
            let sp = side_state(&d, side, PERIOD);
            assert!((sp.v - s0.v).abs() < 1e-12);
            assert!((sp.e - s0.e).abs() < 1e-12);
            assert!((sp.x - s0.x).abs() < 1e-12);
        }
    }

    #[test]
    fn critical_times_example_one() {
        // [PAPER] Example 1: T_* = pi/2, K = 0. The paper prints U = 0 but its
        // own formula yields 1/sqrt(2); the formula value is asserted here.
        let t = critical_times(&example_one()).unwrap();
        assert!((t.t_star - FRAC_PI_2).abs() < 1e-12);
        assert!((t.k_jump - 0.0).abs() < 1e-12);
        assert!((t.u_star - 1.0 / SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn critical_times_example_two() {
        // [PAPER] Example 2: T_* = 2.746801534, U = -0.7844645404, K = -0.94.
        let t = critical_times(&example_two()).unwrap();
        assert!((t.t_star - 2.746_801_534).abs() < 1e-8);
        assert!((t.u_star - (-0.784_464_540_4)).abs() < 1e-8);
        assert!((t.k_jump - (-0.94)).abs() < 1e-12);
    }

    #[test]
    fn critical_times_branch_selection() {
        // [DERIVED] (0, 1, 0, -1): tan(T/2) = -1 selects T/2 = 3*pi/4.
        let t = critical_times(&RiemannData::new(0.0, 1.0, 0.0, -1.0)).unwrap();
        assert!((t.t_star - 1.5 * PI).abs() < 1e-12);
        // [DERIVED] [V]^0 = 0 forces T_* = 2*pi (velocity-free jump).
        let t = critical_times(&RiemannData::new(0.5, 0.5, 0.0, -1.0)).unwrap();
        assert!((t.t_star - PERIOD).abs() < 1e-12);
        // [DERIVED] [E]^0 = 0, [V]^0 != 0: gap = [V] sin t, first root pi.
        let t = critical_times(&RiemannData::new(0.0, 1.0, 0.3, 0.3)).unwrap();
        assert!((t.t_star - PI).abs() < 1e-12);
    }

    #[test]
    fn gap_vanishes_at_t_star() {
        for d in [example_one(), example_two(), RiemannData::new(-0.3, 0.9, 0.4, 0.1)] {
            let t = critical_times(&d).unwrap();
            assert!(characteristic_gap(&d, t.t_star).abs() < 1e-10);
            // t_half is where side velocities agree.
            assert!(jump_v_at(&d, t.t_half).abs() < 1e-10);
            let l = side_state(&d, Side::Left, t.t_half);
            assert!((l.v - t.u_star).abs() < 1e-10);
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify_first_phase(&example_one()), PhaseKind::Shock);
        assert_eq!(
            classify_first_phase(&RiemannData::new(0.0, 1.0, 0.0, -1.0)),
            PhaseKind::Rarefaction
        );
        assert_eq!(
            classify_first_phase(&RiemannData::new(0.5, 0.5, 0.0, -1.0)),
            PhaseKind::Rarefaction
        );
    }

    #[test]
    fn next_phase_example_one() {
        // [PAPER] Example 1 hands off at T_* = pi/2 to (0, 1, 1, 0) at x0 = 1.
        let d = example_one();
        let t = critical_times(&d).unwrap();
        let n = next_phase_data(&d, &t).unwrap();
        assert!((n.v_minus - 0.0).abs() < 1e-12);
        assert!((n.v_plus - 1.0).abs() < 1e-12);
        assert!((n.e_minus - 1.0).abs() < 1e-12);
        assert!((n.e_plus - 0.0).abs() < 1e-12);
        assert!((n.x0 - 1.0).abs() < 1e-12);
        assert!((n.t0 - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(classify_first_phase(&n), PhaseKind::Rarefaction);
    }

    #[test]
    fn assemble_period_alternates_and_fills() {
        for d in [example_one(), example_two(), RiemannData::new(0.0, 1.0, 0.0, -1.0)] {
            let plan = assemble_period(&d).unwrap();
            assert_eq!(plan.phases.len(), 2);
            assert_ne!(plan.phases[0].kind, plan.phases[1].kind);
            let total: f64 = plan.phases.iter().map(Phase::duration).sum();
            assert!((total - PERIOD).abs() < 1e-10);
            assert!((plan.phases[0].t_end - plan.phases[1].t_start).abs() < 1e-12);
        }
    }

    #[test]
    fn velocity_free_jump_single_phase() {
        // [DERIVED] [V]^0 = 0 data spend the whole period in one rarefaction.
        let plan = assemble_period(&RiemannData::new(0.5, 0.5, 0.0, -1.0)).unwrap();
        assert_eq!(plan.phases.len(), 1);
        assert!((plan.phases[0].duration() - PERIOD).abs() < 1e-12);
    }
}
