//! Continuous rarefaction fans filling the wedge between the diverging side
//! characteristics during a rarefaction phase `t in (0, T_*)`.
//!
//! Two constructions are provided:
//!
//! * [`LinearFan`]: profiles affine in `x`, `V = a(t) x + b(t)`,
//!   `E = c(t) x + d(t)`, valid for arbitrary admissible data. The fan
//!   density is spatially constant, `n = 1 - c(t)`.
//! * [`SimpleWaveFan`]: the simple-wave profile available when both states
//!   lie on one circle `V^2 + E^2 = C^2`. Interior points travel on rigid
//!   rotations of that circle; the profile is the inversion of the
//!   characteristic position along the connecting circular arc, with the
//!   branch (sign of `E`) switching where the arc crosses `V = +/-C`.
//! * [`HybridFan`]: a one-parameter family interpolating between the two,
//!   witnessing non-uniqueness of continuous fans for simple-wave data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{self, IntegrateOptions, NumericsError, OdeSolution, ToleranceConfig};
use crate::riemann::{
    classify_first_phase, critical_times, side_state, CriticalTimes, PhaseKind, RiemannData, Side,
    ValidationError,
};

#[derive(Debug, Error)]
pub enum FanError {
    #[error("time {t} is outside the open rarefaction phase (0, {t_star})")]
    OutsidePhase { t: f64, t_star: f64 },
    #[error("|V| = {v} exceeds the wave amplitude C = {c}")]
    AmplitudeExceeded { v: f64, c: f64 },
    #[error("x = {x} lies outside the invertible range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },
    #[error("data is not a simple wave: side amplitudes {left} and {right} differ")]
    NotSimpleWave { left: f64, right: f64 },
    #[error("seed point (t1 = {t1}, x1 = {x1}) is not interior to the fan")]
    BadSeedPoint { t1: f64, x1: f64 },
    #[error("data does not open with a rarefaction phase")]
    NotRarefaction,
    #[error("window [{lo}, {hi}] does not contain the fan support")]
    WindowTooSmall { lo: f64, hi: f64 },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Pointwise fields of a fan profile. `n_hat` is the regular density part.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FieldSample {
    pub v: f64,
    pub e: f64,
    pub n_hat: f64,
}

/// Common interface of the fan constructions.
pub trait Profile {
    /// Profile fields at phase-local time `t` and position `x`.
    fn eval(&self, t: f64, x: f64) -> Result<FieldSample, FanError>;
    /// Fan support `(x_-(t), x_+(t))`.
    fn support(&self, t: f64) -> Result<(f64, f64), FanError>;
    /// Positions where the integrand of energy quadratures may kink.
    fn breakpoints(&self, t: f64) -> Vec<f64>;
    fn data(&self) -> &RiemannData;
    fn times(&self) -> &CriticalTimes;
}

fn check_phase(t: f64, times: &CriticalTimes) -> Result<(), FanError> {
    if t <= 0.0 || t >= times.t_star {
        Err(FanError::OutsidePhase {
            t,
            t_star: times.t_star,
        })
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Linear fan
// ---------------------------------------------------------------------------

/// Fan with profiles affine in `x`; exists for every rarefaction datum and is
/// the energy-minimal continuous fan.
#[derive(Debug, Clone)]
pub struct LinearFan {
    data: RiemannData,
    times: CriticalTimes,
}

/// Affine coefficients `(a, b, c, d)` of `V = a x + b`, `E = c x + d`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinearCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LinearFan {
    pub fn new(data: RiemannData) -> Result<Self, FanError> {
        if classify_first_phase(&data) != PhaseKind::Rarefaction {
            return Err(FanError::NotRarefaction);
        }
        let times = critical_times(&data)?;
        Ok(Self { data, times })
    }

    /// Slopes and offsets by interpolation between the exact side states:
    /// `a = [V](t)/gap(t)`, `c = [E](t)/gap(t)`.
    pub fn coefficients(&self, t: f64) -> Result<LinearCoefficients, FanError> {
        check_phase(t, &self.times)?;
        let left = side_state(&self.data, Side::Left, t);
        let right = side_state(&self.data, Side::Right, t);
        let gap = right.x - left.x;
        let a = (right.v - left.v) / gap;
        let c = (right.e - left.e) / gap;
        Ok(LinearCoefficients {
            a,
            b: left.v - a * left.x,
            c,
            d: left.e - c * left.x,
        })
    }
}

impl Profile for LinearFan {
    fn eval(&self, t: f64, x: f64) -> Result<FieldSample, FanError> {
        check_phase(t, &self.times)?;
        let left = side_state(&self.data, Side::Left, t);
        let right = side_state(&self.data, Side::Right, t);
        if x <= left.x {
            return Ok(FieldSample {
                v: left.v,
                e: left.e,
                n_hat: 1.0,
            });
        }
        if x >= right.x {
            return Ok(FieldSample {
                v: right.v,
                e: right.e,
                n_hat: 1.0,
            });
        }
        let k = self.coefficients(t)?;
        Ok(FieldSample {
            v: k.a * x + k.b,
            e: k.c * x + k.d,
            n_hat: 1.0 - k.c,
        })
    }

    fn support(&self, t: f64) -> Result<(f64, f64), FanError> {
        check_phase(t, &self.times)?;
        Ok((
            side_state(&self.data, Side::Left, t).x,
            side_state(&self.data, Side::Right, t).x,
        ))
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        self.support(t).map(|(a, b)| vec![a, b]).unwrap_or_default()
    }

    fn data(&self) -> &RiemannData {
        &self.data
    }

    fn times(&self) -> &CriticalTimes {
        &self.times
    }
}

// ---------------------------------------------------------------------------
// Simple-wave fan
// ---------------------------------------------------------------------------

/// Branch of the simple-wave relation `E = sigma sqrt(C^2 - V^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `sigma = +1` (E >= 0): position formula `X_1`.
    Plus,
    /// `sigma = -1` (E <= 0): position formula `X_2`.
    Minus,
}

/// Switch times of the boundary formulas: `T_1` is where the left side state
/// crosses `E = 0` (before `T_0 = t_*`), `T_2` where the right one does
/// (after `T_0`). Either may be absent inside the phase.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SwitchTimes {
    pub t1: Option<f64>,
    pub t0: f64,
    pub t2: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SimpleWaveFan {
    data: RiemannData,
    times: CriticalTimes,
    /// Circle radius `C`.
    pub amplitude: f64,
    /// Phase angle of the left state: `(E, V) = C (cos phi, sin phi)`.
    phi_minus: f64,
    /// Arc direction (+1 counterclockwise).
    dir: f64,
    /// Arc length in `(0, pi]`.
    delta_phi: f64,
    switches: SwitchTimes,
}

const INVERT_TOL: f64 = 1e-14;

impl SimpleWaveFan {
    pub fn new(data: RiemannData) -> Result<Self, FanError> {
        if classify_first_phase(&data) != PhaseKind::Rarefaction {
            return Err(FanError::NotRarefaction);
        }
        let left_sq = data.v_minus * data.v_minus + data.e_minus * data.e_minus;
        let right_sq = data.v_plus * data.v_plus + data.e_plus * data.e_plus;
        let scale = left_sq.max(right_sq).max(1.0);
        if (left_sq - right_sq).abs() > 1e-10 * scale {
            return Err(FanError::NotSimpleWave {
                left: left_sq.sqrt(),
                right: right_sq.sqrt(),
            });
        }
        let times = critical_times(&data)?;
        let amplitude = (0.5 * (left_sq + right_sq)).sqrt();
        if amplitude < 1e-14 {
            return Err(FanError::Validation(ValidationError::DegenerateData));
        }
        let phi_minus = data.v_minus.atan2(data.e_minus);
        let phi_plus = data.v_plus.atan2(data.e_plus);
        // Shorter arc; the exact half-circle tie resolves counterclockwise,
        // i.e. through the sign change of E selected by [E]^0 <= 0.
        let mut d_phi = (phi_plus - phi_minus) % (2.0 * std::f64::consts::PI);
        if d_phi <= -std::f64::consts::PI {
            d_phi += 2.0 * std::f64::consts::PI;
        } else if d_phi > std::f64::consts::PI {
            d_phi -= 2.0 * std::f64::consts::PI;
        }
        if d_phi == 0.0 {
            return Err(FanError::Validation(ValidationError::DegenerateData));
        }
        let dir = if d_phi > 0.0 { 1.0 } else { -1.0 };
        let delta_phi = d_phi.abs();

        let switches = switch_times_impl(&data, &times, phi_minus, phi_minus + d_phi);
        Ok(Self {
            data,
            times,
            amplitude,
            phi_minus,
            dir,
            delta_phi,
            switches,
        })
    }

    pub fn switch_times(&self) -> SwitchTimes {
        self.switches
    }

    /// Characteristic position of the profile value `V` on the given branch:
    /// `X_1 = C (cos q - cos(q + t))`, `X_2 = C (-cos q + cos(q - t))` with
    /// `q = asin(V / C)`, both offset by the jump location.
    pub fn position(&self, branch: Branch, t: f64, v: f64) -> Result<f64, FanError> {
        let c = self.amplitude;
        if v.abs() > c * (1.0 + 1e-12) {
            return Err(FanError::AmplitudeExceeded { v, c });
        }
        let q = (v / c).clamp(-1.0, 1.0).asin();
        let rel = match branch {
            Branch::Plus => c * (q.cos() - (q + t).cos()),
            Branch::Minus => c * (-q.cos() + (q - t).cos()),
        };
        Ok(self.data.x0 + rel)
    }

    /// Invert `position(branch, t, .)` on its maximal monotone `q`-interval.
    pub fn invert(&self, branch: Branch, t: f64, x: f64) -> Result<f64, FanError> {
        check_phase(t, &self.times)?;
        let half_pi = std::f64::consts::FRAC_PI_2;
        // X_1 increases in q while cos(q + t/2) > 0, X_2 while cos(q - t/2) > 0.
        let (q_lo, q_hi) = match branch {
            Branch::Plus => (-half_pi, (half_pi - 0.5 * t).max(-half_pi)),
            Branch::Minus => ((0.5 * t - half_pi).min(half_pi), half_pi),
        };
        let c = self.amplitude;
        let f = |q: f64| {
            let rel = match branch {
                Branch::Plus => c * (q.cos() - (q + t).cos()),
                Branch::Minus => c * (-q.cos() + (q - t).cos()),
            };
            self.data.x0 + rel - x
        };
        let (f_lo, f_hi) = (f(q_lo), f(q_hi));
        if f_lo > 0.0 || f_hi < 0.0 {
            return Err(FanError::OutOfRange {
                x,
                lo: x + f_lo,
                hi: x + f_hi,
            });
        }
        let q = numerics::find_root(&f, q_lo, q_hi, INVERT_TOL)?;
        Ok(c * q.sin())
    }

    /// Position of the arc point with parameter `s in [0, delta_phi]`.
    fn arc_x(&self, t: f64, s: f64) -> f64 {
        let phi = self.phi_minus + self.dir * s;
        self.data.x0 + self.amplitude * ((phi - t).cos() - phi.cos())
    }

    /// Parameter values where `d(arc_x)/ds = 0` (profile folds).
    fn arc_criticals(&self, t: f64) -> Vec<f64> {
        // cos(phi - t/2) = 0  <=>  phi = t/2 + pi/2 + k pi.
        let mut out = Vec::new();
        let base = 0.5 * t + std::f64::consts::FRAC_PI_2;
        for k in -6..=6 {
            let phi = base + k as f64 * std::f64::consts::PI;
            let s = self.dir * (phi - self.phi_minus);
            if s > 1e-12 && s < self.delta_phi - 1e-12 {
                out.push(s);
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        out
    }

    /// All arc parameters mapping to position `x`, sorted ascending.
    fn arc_solutions(&self, t: f64, x: f64) -> Vec<f64> {
        let mut cuts = vec![0.0];
        cuts.extend(self.arc_criticals(t));
        cuts.push(self.delta_phi);
        let f = |s: f64| self.arc_x(t, s) - x;
        let mut sols = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (f(a), f(b));
            if fa == 0.0 {
                sols.push(a);
                continue;
            }
            if fa * fb <= 0.0 {
                if let Ok(s) = numerics::find_root(&f, a, b, INVERT_TOL) {
                    sols.push(s);
                }
            }
        }
        sols.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        sols
    }

    fn sample_at(&self, t: f64, s: f64) -> FieldSample {
        let c = self.amplitude;
        let phi = self.phi_minus + self.dir * s;
        let theta = phi - t;
        let v = c * theta.sin();
        let e = c * theta.cos();
        // n = 1 - E_x with E_x = (dE/ds)/(dx/ds) = -V / g.
        let g = c * (phi.sin() - theta.sin());
        let n_hat = if g.abs() > 1e-13 * c.max(1.0) {
            1.0 + v / g
        } else {
            f64::INFINITY
        };
        FieldSample { v, e, n_hat }
    }
}

fn switch_times_impl(
    data: &RiemannData,
    times: &CriticalTimes,
    phi_minus: f64,
    phi_plus: f64,
) -> SwitchTimes {
    // E_-(t) = C cos(phi_- - t) vanishes at t = phi_- + pi/2 + k pi.
    let first_root_in = |phi: f64, lo: f64, hi: f64| -> Option<f64> {
        let mut best: Option<f64> = None;
        for k in -4..=4 {
            let t = phi + std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI;
            if t > lo + 1e-12 && t < hi - 1e-12 && best.map_or(true, |b| t < b) {
                best = Some(t);
            }
        }
        best
    };
    let t0 = times.t_half;
    let t1 = first_root_in(phi_minus, 0.0, t0);
    let t2 = first_root_in(phi_plus, t0, times.t_star);
    // Closed-form residual check: the side field really vanishes there.
    if let Some(t) = t1 {
        debug_assert!(side_state(data, Side::Left, t).e.abs() < 1e-9);
    }
    if let Some(t) = t2 {
        debug_assert!(side_state(data, Side::Right, t).e.abs() < 1e-9);
    }
    SwitchTimes { t1, t0, t2 }
}

impl Profile for SimpleWaveFan {
    fn eval(&self, t: f64, x: f64) -> Result<FieldSample, FanError> {
        check_phase(t, &self.times)?;
        let left = side_state(&self.data, Side::Left, t);
        let right = side_state(&self.data, Side::Right, t);
        if x <= left.x {
            return Ok(FieldSample {
                v: left.v,
                e: left.e,
                n_hat: 1.0,
            });
        }
        if x >= right.x {
            return Ok(FieldSample {
                v: right.v,
                e: right.e,
                n_hat: 1.0,
            });
        }
        let sols = self.arc_solutions(t, x);
        let s = match sols.len() {
            0 => {
                // The arc is continuous from x_- to x_+; by the intermediate
                // value theorem interior positions are always attained. Guard
                // against roundoff at the very edges.
                if x - left.x < right.x - x {
                    0.0
                } else {
                    self.delta_phi
                }
            }
            1 => sols[0],
            // Folded (multivalued) region: keep the sheet that joins the
            // nearer boundary continuously.
            _ => {
                if x - left.x <= right.x - x {
                    sols[0]
                } else {
                    *sols.last().expect("nonempty")
                }
            }
        };
        Ok(self.sample_at(t, s))
    }

    fn support(&self, t: f64) -> Result<(f64, f64), FanError> {
        check_phase(t, &self.times)?;
        Ok((
            side_state(&self.data, Side::Left, t).x,
            side_state(&self.data, Side::Right, t).x,
        ))
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        let Ok((lo, hi)) = self.support(t) else {
            return Vec::new();
        };
        let mut pts = vec![lo, hi];
        // Fold points and sigma switches (V = +/-C) kink the integrand.
        for s in self.arc_criticals(t) {
            pts.push(self.arc_x(t, s));
        }
        let base = t - std::f64::consts::FRAC_PI_2;
        for k in -6..=6 {
            // theta = phi - t = +/- pi/2 + k pi  <=>  E = 0 on the arc.
            let phi = base + k as f64 * std::f64::consts::PI;
            let s = self.dir * (phi - self.phi_minus);
            if s > 1e-12 && s < self.delta_phi - 1e-12 {
                pts.push(self.arc_x(t, s));
            }
        }
        pts
    }

    fn data(&self) -> &RiemannData {
        &self.data
    }

    fn times(&self) -> &CriticalTimes {
        &self.times
    }
}

// ---------------------------------------------------------------------------
// Hybrid fan
// ---------------------------------------------------------------------------

/// Hybrid fan: from the seed time on, the profile between the left boundary
/// and a marker transported with the simple-wave velocity field is replaced
/// by an affine segment. Witnesses the non-uniqueness of continuous fans.
#[derive(Debug, Clone)]
pub struct HybridFan {
    base: SimpleWaveFan,
    t_seed: f64,
    x_seed: f64,
    path: OdeSolution,
    t_path_end: f64,
}

impl HybridFan {
    /// Build from a seed `(t1, x1)` strictly inside the simple-wave fan.
    pub fn construct(
        base: SimpleWaveFan,
        t1: f64,
        x1: f64,
        tol: &ToleranceConfig,
    ) -> Result<Self, FanError> {
        check_phase(t1, &base.times)?;
        let (lo, hi) = base.support(t1)?;
        if x1 <= lo || x1 >= hi {
            return Err(FanError::BadSeedPoint { t1, x1 });
        }
        let t_end = base.times.t_star * (1.0 - 1e-9);
        let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = fan_velocity(&base, t, y[0]);
        };
        let path = numerics::integrate(
            &rhs,
            (t1, t_end),
            &[x1],
            tol,
            &IntegrateOptions::default(),
        )?;
        Ok(Self {
            base,
            t_seed: t1,
            x_seed: x1,
            path,
            t_path_end: t_end,
        })
    }

    pub fn seed(&self) -> (f64, f64) {
        (self.t_seed, self.x_seed)
    }

    /// Right endpoint of the affine segment at time `t >= t_seed`.
    pub fn segment_end(&self, t: f64) -> f64 {
        self.path.eval(t.min(self.t_path_end))[0]
    }
}

/// Velocity field of the simple-wave fan, extended by the side states so it
/// is defined on all of space (used to transport the hybrid marker).
fn fan_velocity(fan: &SimpleWaveFan, t: f64, x: f64) -> f64 {
    let left = side_state(fan.data(), Side::Left, t);
    let right = side_state(fan.data(), Side::Right, t);
    if x <= left.x {
        left.v
    } else if x >= right.x {
        right.v
    } else {
        fan.eval(t, x).map(|s| s.v).unwrap_or(0.5 * (left.v + right.v))
    }
}

impl Profile for HybridFan {
    fn eval(&self, t: f64, x: f64) -> Result<FieldSample, FanError> {
        check_phase(t, &self.base.times)?;
        if t < self.t_seed {
            return self.base.eval(t, x);
        }
        let left = side_state(self.base.data(), Side::Left, t);
        let right = side_state(self.base.data(), Side::Right, t);
        if x <= left.x {
            return Ok(FieldSample {
                v: left.v,
                e: left.e,
                n_hat: 1.0,
            });
        }
        if x >= right.x {
            return Ok(FieldSample {
                v: right.v,
                e: right.e,
                n_hat: 1.0,
            });
        }
        let xr = self.segment_end(t).clamp(left.x, right.x);
        if x >= xr {
            return self.base.eval(t, x);
        }
        // Affine stretch between the left state and the simple-wave value at
        // the transported marker.
        let end = self.base.eval(t, xr)?;
        let w = xr - left.x;
        if w < 1e-13 {
            return self.base.eval(t, x);
        }
        let lam = (x - left.x) / w;
        let c_slope = (end.e - left.e) / w;
        Ok(FieldSample {
            v: left.v + lam * (end.v - left.v),
            e: left.e + lam * (end.e - left.e),
            n_hat: 1.0 - c_slope,
        })
    }

    fn support(&self, t: f64) -> Result<(f64, f64), FanError> {
        self.base.support(t)
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        let mut pts = self.base.breakpoints(t);
        if t >= self.t_seed {
            pts.push(self.segment_end(t));
        }
        pts
    }

    fn data(&self) -> &RiemannData {
        self.base.data()
    }

    fn times(&self) -> &CriticalTimes {
        self.base.times()
    }
}

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

/// Windowed total energy `1/2 integral (n V^2 + E^2) dx` at time `t`.
pub fn total_energy(
    profile: &dyn Profile,
    t: f64,
    window: (f64, f64),
) -> Result<f64, FanError> {
    let (lo, hi) = window;
    let (xl, xr) = profile.support(t)?;
    if lo > xl || hi < xr {
        return Err(FanError::WindowTooSmall { lo, hi });
    }
    let f = |x: f64| {
        let s = profile.eval(t, x).expect("inside checked phase");
        0.5 * (s.n_hat * s.v * s.v + s.e * s.e)
    };
    let pts = profile.breakpoints(t);
    Ok(numerics::quad_breakpoints(&f, lo, hi, &pts, 1e-11)?)
}

/// Windowed energy of the pure side states (no fan), used for comparisons.
pub fn side_state_energy(data: &RiemannData, t: f64, window: (f64, f64), split: f64) -> f64 {
    let left = side_state(data, Side::Left, t);
    let right = side_state(data, Side::Right, t);
    0.5 * ((left.v * left.v + left.e * left.e) * (split - window.0)
        + (right.v * right.v + right.e * right.e) * (window.1 - split))
}

/// Closed-form excess of the simple-wave fan energy over the linear fan
/// energy: `-(1/12) [E]^0 (([E]^0)^2 + ([V]^0)^2) >= 0`; time independent.
pub fn energy_gap(data: &RiemannData) -> Result<f64, FanError> {
    let left_sq = data.v_minus * data.v_minus + data.e_minus * data.e_minus;
    let right_sq = data.v_plus * data.v_plus + data.e_plus * data.e_plus;
    let scale = left_sq.max(right_sq).max(1.0);
    if (left_sq - right_sq).abs() > 1e-10 * scale {
        return Err(FanError::NotSimpleWave {
            left: left_sq.sqrt(),
            right: right_sq.sqrt(),
        });
    }
    let je = data.jump_e();
    let jv = data.jump_v();
    Ok(-(je * (je * je + jv * jv)) / 12.0)
}

/// Closed form of the simple-wave fan energy over its own support:
/// `1/2 (C^2 gap - C^2 [E](t) + [E^3](t)/3)`.
pub fn simple_wave_fan_energy(fan: &SimpleWaveFan, t: f64) -> Result<f64, FanError> {
    check_phase(t, fan.times())?;
    let left = side_state(fan.data(), Side::Left, t);
    let right = side_state(fan.data(), Side::Right, t);
    let c2 = fan.amplitude * fan.amplitude;
    let je = right.e - left.e;
    let je3 = right.e.powi(3) - left.e.powi(3);
    Ok(0.5 * (c2 * (right.x - left.x) - c2 * je + je3 / 3.0))
}

/// Local energy density `V^2 + E^2` of a profile.
pub fn local_energy(profile: &dyn Profile, t: f64, x: f64) -> Result<f64, FanError> {
    let s = profile.eval(t, x)?;
    Ok(s.v * s.v + s.e * s.e)
}

/// Interior minimiser of the linear-fan local energy,
/// `x_* = -(a b + c d) / (a^2 + c^2)` (vertex of the quadratic).
pub fn linear_fan_energy_argmin(k: &LinearCoefficients) -> f64 {
    -(k.a * k.b + k.c * k.d) / (k.a * k.a + k.c * k.c)
}
