//! Singular shock waves for the collision phase `t in (0, T_*)`.
//!
//! When the side characteristics converge, mass accumulates on the shock as
//! a delta measure `e(t) delta(x - Phi(t))` with amplitude `e(t) = -[E](t)`.
//! The regular density stays `n = 1` off the shock. The shock position obeys
//! the generalized Rankine-Hugoniot relation obtained from energy balance,
//!
//! ```text
//! d/dt ( e(t) q(t)^2 ) = -[V^3](t) + K q(t),      q = dPhi/dt,
//! ```
//!
//! with `K = [V^2 + E^2]^0` constant along the phase. Admissibility pins the
//! speed at the phase midpoint: the side velocities agree there, so
//! `q(t_*) = U`. The squared speed `Q = q^2` is integrated outward in both
//! directions from `t_*`; where `Q` reaches zero the speed changes sign with
//! a square-root cusp.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{self, IntegrateOptions, NumericsError, OdeSolution, ToleranceConfig};
use crate::riemann::{
    classify_first_phase, critical_times, jump_e_at, jump_v_at, side_state, CriticalTimes,
    PhaseKind, RiemannData, Side, ValidationError,
};

#[derive(Debug, Error)]
pub enum ShockError {
    #[error("data does not open with a shock phase (side characteristics diverge)")]
    NotShockPhase,
    #[error("time {t} is outside the open shock phase (0, {t_star})")]
    OutsidePhase { t: f64, t_star: f64 },
    #[error("midpoint speed U = {u} is too close to zero to select a branch")]
    DegenerateSpeed { u: f64 },
    #[error("delta amplitude is not positive at t = {t}: e = {e}")]
    AmplitudeCollapse { t: f64, e: f64 },
    #[error("speed changes sign more than once in one direction; unsupported")]
    MultipleCrossings,
    #[error("window [{lo}, {hi}] does not contain the shock trajectory")]
    WindowTooSmall { lo: f64, hi: f64 },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Delta amplitude `e(t) = -[E](t)`.
pub fn amplitude(data: &RiemannData, t: f64) -> f64 {
    -jump_e_at(data, t)
}

/// Amplitude rate `de/dt = -[V](t)` (the mass jump relation).
pub fn amplitude_rate(data: &RiemannData, t: f64) -> f64 {
    -jump_v_at(data, t)
}

/// Jump of the cubed velocity `[V^3](t) = V_+(t)^3 - V_-(t)^3` expanded as a
/// trigonometric polynomial in the jumps of products of the initial data.
pub fn jump_v3(data: &RiemannData, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let jm = |f: fn(f64, f64) -> f64| {
        f(data.v_plus, data.e_plus) - f(data.v_minus, data.e_minus)
    };
    let e3 = jm(|_, e| e * e * e);
    let ev2 = jm(|v, e| e * v * v);
    let v3 = jm(|v, _| v * v * v);
    let e2v = jm(|v, e| e * e * v);
    s * c * c * (e3 - 3.0 * ev2) + c * c * c * (v3 - 3.0 * e2v) + 3.0 * e2v * c - e3 * s
}

/// Classical (non-singular) Rankine-Hugoniot speed `(V_-(t) + V_+(t)) / 2`.
pub fn classical_speed(data: &RiemannData, t: f64) -> f64 {
    0.5 * (side_state(data, Side::Left, t).v + side_state(data, Side::Right, t).v)
}

/// Midpoint of the side characteristics, the classical shock position.
pub fn classical_position(data: &RiemannData, t: f64) -> f64 {
    0.5 * (side_state(data, Side::Left, t).x + side_state(data, Side::Right, t).x)
}

/// One monotone-sign piece of the shock curve. `path` holds `y = [Q, Phi]`.
#[derive(Debug, Clone)]
struct Segment {
    sign: f64,
    t_min: f64,
    t_max: f64,
    path: OdeSolution,
}

/// Residuals of the generalized Rankine-Hugoniot relation at one time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RhResiduals {
    /// `|e Q' + e' Q + [V^3] - K q|` with `Q'` from the dense derivative.
    pub algebraic: f64,
    /// Same relation with `d/dt (e Q)` replaced by a central difference.
    pub finite_difference: f64,
}

/// Mass and energy closure over a space-time box around the shock.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BalanceReport {
    pub mass_residual: f64,
    pub energy_residual: f64,
}

/// The admissible singular shock over one phase.
#[derive(Debug, Clone)]
pub struct ShockCurve {
    data: RiemannData,
    times: CriticalTimes,
    segments: Vec<Segment>,
    /// Zeros of the speed inside the phase, if any.
    pub crossings: Vec<f64>,
    phi_shift: f64,
    t_lo: f64,
    t_hi: f64,
}

/// Step cap keeping the dense output accurate enough for the residual audits.
const MAX_STEP: f64 = 1e-3;
/// Relative margin kept from the singular phase endpoints.
const END_MARGIN: f64 = 1e-9;

fn q_square_rhs(data: &RiemannData, k: f64, sign: f64, t: f64, q_sq: f64) -> f64 {
    let e = amplitude(data, t);
    let root = q_sq.max(0.0).sqrt();
    (-jump_v3(data, t) + sign * k * root - amplitude_rate(data, t) * q_sq) / e
}

impl ShockCurve {
    pub fn data(&self) -> &RiemannData {
        &self.data
    }

    pub fn times(&self) -> &CriticalTimes {
        &self.times
    }

    /// Integrated time range `(t_lo, t_hi)`, slightly inside `(0, T_*)`.
    pub fn span(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    fn segment(&self, t: f64) -> Result<&Segment, ShockError> {
        self.segments
            .iter()
            .find(|s| t >= s.t_min - 1e-12 && t <= s.t_max + 1e-12)
            .ok_or(ShockError::OutsidePhase {
                t,
                t_star: self.times.t_star,
            })
    }

    /// Squared speed `Q(t)`.
    pub fn q_squared(&self, t: f64) -> Result<f64, ShockError> {
        Ok(self.segment(t)?.path.eval(t)[0].max(0.0))
    }

    /// Signed speed `q(t) = dPhi/dt`.
    pub fn speed(&self, t: f64) -> Result<f64, ShockError> {
        let seg = self.segment(t)?;
        Ok(seg.sign * seg.path.eval(t)[0].max(0.0).sqrt())
    }

    /// Shock position `Phi(t)`, anchored so `Phi -> x0` as `t -> 0`.
    pub fn position(&self, t: f64) -> Result<f64, ShockError> {
        Ok(self.segment(t)?.path.eval(t)[1] + self.phi_shift)
    }

    /// Delta amplitude at `t`.
    pub fn amplitude(&self, t: f64) -> f64 {
        amplitude(&self.data, t)
    }

    /// Delta-carried energy `w(t) = e(t) Q(t) / 2`.
    pub fn energy_weight(&self, t: f64) -> Result<f64, ShockError> {
        Ok(0.5 * self.amplitude(t) * self.q_squared(t)?)
    }

    /// Distances from the anchoring identities: `Phi(t_lo)` to the initial
    /// jump position and `Phi(t_hi)` to the characteristic meeting point.
    pub fn endpoint_residuals(&self) -> (f64, f64) {
        let start = self
            .position(self.t_lo)
            .map(|p| (p - self.data.x0).abs())
            .unwrap_or(f64::NAN);
        let meet = side_state(&self.data, Side::Left, self.times.t_star).x;
        let end = self
            .position(self.t_hi)
            .map(|p| (p - meet).abs())
            .unwrap_or(f64::NAN);
        (start, end)
    }

    /// Entropy margin `min(max(V_-, V_+) - q, q - min(V_-, V_+))`; the shock
    /// is admissible where this is nonnegative.
    pub fn entropy_margin(&self, t: f64) -> Result<f64, ShockError> {
        let q = self.speed(t)?;
        let vl = side_state(&self.data, Side::Left, t).v;
        let vr = side_state(&self.data, Side::Right, t).v;
        Ok((vl.max(vr) - q).min(q - vl.min(vr)))
    }

    /// Residuals of `d/dt (e Q) = -[V^3] + K q` at `t`; `h` is the central
    /// difference width for the finite-difference form.
    pub fn rh_residuals(&self, t: f64, h: f64) -> Result<RhResiduals, ShockError> {
        let seg = self.segment(t)?;
        let y = seg.path.eval(t);
        let dy = seg.path.eval_derivative(t);
        let e = self.amplitude(t);
        let q = seg.sign * y[0].max(0.0).sqrt();
        let target = -jump_v3(&self.data, t) + self.times.k_jump * q;
        let algebraic = (e * dy[0] + amplitude_rate(&self.data, t) * y[0] - target).abs();

        let eq = |tt: f64| -> Result<f64, ShockError> { Ok(self.amplitude(tt) * self.q_squared(tt)?) };
        let diff = (eq(t + h)? - eq(t - h)?) / (2.0 * h);
        let finite_difference = (diff - target).abs();
        Ok(RhResiduals {
            algebraic,
            finite_difference,
        })
    }

    /// Mass and energy closure of the shock phase over `span = (ta, tb)` and
    /// a spatial window containing the trajectory. Conserved quantities are
    /// the window integrals plus the delta contributions `e` and `w`; fluxes
    /// through the walls are the side-state values.
    pub fn balance_report(
        &self,
        span: (f64, f64),
        window: (f64, f64),
        quad_tol: f64,
    ) -> Result<BalanceReport, ShockError> {
        let (ta, tb) = span;
        let (xl, xr) = window;
        let mut phi_min = f64::INFINITY;
        let mut phi_max = f64::NEG_INFINITY;
        for i in 0..=64 {
            let t = ta + (tb - ta) * i as f64 / 64.0;
            let p = self.position(t)?;
            phi_min = phi_min.min(p);
            phi_max = phi_max.max(p);
        }
        if xl >= phi_min || xr <= phi_max {
            return Err(ShockError::WindowTooSmall { lo: xl, hi: xr });
        }

        // Mass: d/dt [ (xr - xl) + e ] = V_-(t) - V_+(t).
        let mass_flux = numerics::quad(&|t: f64| -jump_v_at(&self.data, t), ta, tb, quad_tol)?;
        let mass_residual =
            (self.amplitude(tb) - self.amplitude(ta) - mass_flux).abs();

        // Energy: d/dt [ int 1/2 (V^2 + E^2) dx + w ] = -1/2 [V^3](t).
        let energy_at = |t: f64| -> Result<f64, ShockError> {
            let l = side_state(&self.data, Side::Left, t);
            let r = side_state(&self.data, Side::Right, t);
            let p = self.position(t)?;
            Ok(0.5 * ((l.v * l.v + l.e * l.e) * (p - xl) + (r.v * r.v + r.e * r.e) * (xr - p))
                + self.energy_weight(t)?)
        };
        let energy_flux =
            numerics::quad(&|t: f64| -0.5 * jump_v3(&self.data, t), ta, tb, quad_tol)?;
        let energy_residual = (energy_at(tb)? - energy_at(ta)? - energy_flux).abs();

        Ok(BalanceReport {
            mass_residual,
            energy_residual,
        })
    }
}

/// Integrate the admissible shock curve over the open phase.
pub fn integrate_shock(
    data: &RiemannData,
    tol: &ToleranceConfig,
) -> Result<ShockCurve, ShockError> {
    if classify_first_phase(data) != PhaseKind::Shock {
        return Err(ShockError::NotShockPhase);
    }
    let times = critical_times(data)?;
    let t_half = times.t_half;
    let u = times.u_star;
    if u.abs() < 1e-10 {
        return Err(ShockError::DegenerateSpeed { u });
    }
    let e_mid = amplitude(data, t_half);
    if e_mid <= 0.0 {
        return Err(ShockError::AmplitudeCollapse {
            t: t_half,
            e: e_mid,
        });
    }

    let t_lo = END_MARGIN * times.t_star;
    let t_hi = times.t_star * (1.0 - END_MARGIN);
    let y_mid = [u * u, 0.0];
    let sign0 = if u > 0.0 { 1.0 } else { -1.0 };

    let mut segments: Vec<Segment> = Vec::new();
    let mut crossings = Vec::new();
    for (target, backward) in [(t_lo, true), (t_hi, false)] {
        let mut t_from = t_half;
        let mut y_from = y_mid;
        let mut sign = sign0;
        let mut flips = 0usize;
        loop {
            let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
                dy[0] = q_square_rhs(data, times.k_jump, sign, t, y[0]);
                dy[1] = sign * y[0].max(0.0).sqrt();
            };
            let event = |_t: f64, y: &[f64]| y[0];
            let opts = IntegrateOptions {
                max_step: Some(MAX_STEP),
                event: Some(&event),
                ..IntegrateOptions::default()
            };
            let sol = numerics::integrate(&rhs, (t_from, target), &y_from, tol, &opts)?;
            let hit = sol.event.clone();
            let reached = sol.t_end();
            segments.push(Segment {
                sign,
                t_min: if backward { reached } else { t_from },
                t_max: if backward { t_from } else { reached },
                path: sol,
            });
            match hit {
                None => break,
                Some(ev) => {
                    if flips >= 1 {
                        return Err(ShockError::MultipleCrossings);
                    }
                    flips += 1;
                    crossings.push(ev.t);
                    t_from = ev.t;
                    y_from = [0.0, ev.y[1]];
                    sign = -sign;
                }
            }
        }
    }
    crossings.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    // Anchor: the shock is born at the initial jump position.
    let first = segments
        .iter()
        .map(|s| (s.t_min, s.path.eval(s.t_min)[1]))
        .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"))
        .expect("segments nonempty");
    let phi_shift = data.x0 - first.1;

    segments.sort_by(|a, b| a.t_min.partial_cmp(&b.t_min).expect("finite"));
    Ok(ShockCurve {
        data: *data,
        times,
        segments,
        crossings,
        phi_shift,
        t_lo,
        t_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn example_one() -> RiemannData {
        RiemannData::new(1.0, 0.0, 0.0, -1.0)
    }

    fn example_two() -> RiemannData {
        RiemannData::new(1.0, 0.5, 1.0, 0.9)
    }

    #[test]
    fn jump_v3_matches_direct_evaluation() {
        // [DERIVED] the trig-polynomial expansion against V_+^3 - V_-^3
        // evaluated from the rotated side states.
        let sets = [
            example_one(),
            example_two(),
            RiemannData::new(0.3, -1.2, 0.7, -0.4),
            RiemannData::new(-2.0, 1.5, -0.3, 0.8),
        ];
        for data in sets {
            for i in 0..200 {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 200.0;
                let l = side_state(&data, Side::Left, t);
                let r = side_state(&data, Side::Right, t);
                let direct = r.v.powi(3) - l.v.powi(3);
                assert!(
                    (jump_v3(&data, t) - direct).abs() < 1e-12,
                    "t = {t}: {} vs {direct}",
                    jump_v3(&data, t)
                );
            }
        }
    }

    #[test]
    fn amplitude_example_values() {
        // [PAPER] example two opens with e(0) = 0.1.
        let data = example_two();
        assert!((amplitude(&data, 0.0) - 0.1).abs() < 1e-15);
        // [TRIVIAL] example one: e(t) = sin t + cos t on the phase.
        let one = example_one();
        for &t in &[0.2, 0.7, 1.3] {
            assert!((amplitude(&one, t) - (t.sin() + t.cos())).abs() < 1e-14);
        }
        // Rate is the time derivative (finite-difference oracle).
        let h = 1e-6;
        for &t in &[0.3, 0.9] {
            let fd = (amplitude(&data, t + h) - amplitude(&data, t - h)) / (2.0 * h);
            assert!((amplitude_rate(&data, t) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn example_one_curve_anchors_and_entropy() {
        let data = example_one();
        let tol = ToleranceConfig::default();
        let curve = integrate_shock(&data, &tol).unwrap();
        let (start, end) = curve.endpoint_residuals();
        // [DERIVED] Phi -> 0 at the opening and to the characteristic
        // meeting point x = 1 at T_* = pi/2.
        assert!(start < 1e-7, "start residual {start}");
        assert!(end < 1e-6, "end residual {end}");
        // Midpoint speed equals U = 1/sqrt(2).
        let q_mid = curve.speed(curve.times().t_half).unwrap();
        assert!((q_mid - 1.0 / 2f64.sqrt()).abs() < 1e-10);
        for i in 1..50 {
            let t = FRAC_PI_2 * i as f64 / 50.0;
            assert!(curve.entropy_margin(t).unwrap() > -1e-7, "t = {t}");
            assert!(curve.amplitude(t) > 0.0);
        }
    }

    #[test]
    fn example_two_speed_crossing() {
        // [PAPER] the speed changes sign at t0 = 0.69174927.
        let data = example_two();
        let loose = ToleranceConfig {
            ode_rel: 1e-6,
            ode_abs: 1e-8,
            ..ToleranceConfig::default()
        };
        let tight = ToleranceConfig {
            ode_rel: 1e-12,
            ode_abs: 1e-14,
            ..ToleranceConfig::default()
        };
        let c_loose = integrate_shock(&data, &loose).unwrap();
        let c_tight = integrate_shock(&data, &tight).unwrap();
        assert_eq!(c_loose.crossings.len(), 1);
        assert_eq!(c_tight.crossings.len(), 1);
        let t0 = 0.69174927;
        let err_tight = (c_tight.crossings[0] - t0).abs();
        assert!(err_tight < 1e-4, "tight t0 error {err_tight}");
        // Tightening the tolerance does not move the root away.
        let err_loose = (c_loose.crossings[0] - t0).abs();
        assert!(err_tight <= err_loose + 1e-9);
        // Square-root cusp: |q| ~ c sqrt(|t - t0|) near the crossing.
        let t0_num = c_tight.crossings[0];
        let q1 = c_tight.speed(t0_num + 1e-4).unwrap().abs();
        let q2 = c_tight.speed(t0_num + 4e-4).unwrap().abs();
        let ratio = q2 / q1;
        assert!(
            ratio > 2.0 / 1.5 && ratio < 2.0 * 1.5,
            "cusp scaling ratio {ratio}"
        );
    }

    #[test]
    fn residuals_small_on_both_examples() {
        let tol = ToleranceConfig::default();
        for data in [example_one(), example_two()] {
            let curve = integrate_shock(&data, &tol).unwrap();
            let (lo, hi) = curve.span();
            for i in 1..40 {
                let t = lo + (hi - lo) * i as f64 / 40.0;
                if curve
                    .crossings
                    .iter()
                    .any(|&c| (t - c).abs() < 5e-2)
                {
                    continue;
                }
                let r = curve.rh_residuals(t, 1e-4).unwrap();
                assert!(r.algebraic < 1e-10, "r1 = {} at t = {t}", r.algebraic);
                assert!(
                    r.finite_difference < 1e-6,
                    "r2 = {} at t = {t}",
                    r.finite_difference
                );
            }
        }
    }

    #[test]
    fn balance_closes_for_example_one() {
        let tol = ToleranceConfig::default();
        let curve = integrate_shock(&example_one(), &tol).unwrap();
        let (lo, hi) = curve.span();
        let report = curve
            .balance_report((lo + 0.05, hi - 0.05), (-4.0, 6.0), 1e-12)
            .unwrap();
        assert!(report.mass_residual < 1e-6, "mass {}", report.mass_residual);
        assert!(
            report.energy_residual < 1e-6,
            "energy {}",
            report.energy_residual
        );
        assert!(matches!(
            curve.balance_report((lo + 0.05, hi - 0.05), (0.4, 0.6), 1e-12),
            Err(ShockError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn classical_curve_stays_close_on_example_one() {
        // [PAPER] sup |Phi - Phi_RH| stays below 0.02 on example one.
        let tol = ToleranceConfig::default();
        let curve = integrate_shock(&example_one(), &tol).unwrap();
        let (lo, hi) = curve.span();
        let mut sup = 0.0f64;
        for i in 0..=200 {
            let t = lo + (hi - lo) * i as f64 / 200.0;
            let d = (curve.position(t).unwrap() - classical_position(&example_one(), t)).abs();
            sup = sup.max(d);
        }
        assert!(sup < 0.02, "sup |Phi - Phi_RH| = {sup}");
        assert!(sup > 1e-4, "curves should not coincide: {sup}");
    }

    #[test]
    fn degenerate_and_misclassified_data_are_rejected() {
        let tol = ToleranceConfig::default();
        // Rarefaction data has no shock phase.
        assert!(matches!(
            integrate_shock(&RiemannData::new(0.0, 1.0, 0.0, -1.0), &tol),
            Err(ShockError::NotShockPhase)
        ));
        // Head-on symmetric collision: U = 0, branch selection degenerates.
        assert!(matches!(
            integrate_shock(&RiemannData::new(1.0, -1.0, 0.0, 0.0), &tol),
            Err(ShockError::DegenerateSpeed { .. })
        ));
    }
}
