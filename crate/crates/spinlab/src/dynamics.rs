//! Precession dynamics under a uniform magnetic field along the symmetry
//! axis: the interaction Hamiltonian, the symbolic equations of motion, the
//! closed-form precession, and a Runge-Kutta integration of the underlying
//! phase-space flow for cross-checking.

use crate::algebra::{
    poisson_bracket, CanonicalVariable, GaussianRational, PhasePolynomial, Rational,
};
use crate::spin::{CheckResult, SpinSet};
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::io::Write;
use thiserror::Error;

/// Physical constants of one run. Defaults are the unit system
/// `e = m = c = 1` with the field chosen so the precession rate is 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub charge: f64,
    pub mass: f64,
    pub light_speed: f64,
    pub field_b3: f64,
    pub lande_g: f64,
    pub kappa_value: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            charge: 1.0,
            mass: 1.0,
            light_speed: 1.0,
            field_b3: 1.0,
            lande_g: 2.0,
            kappa_value: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let all_finite = [
            self.charge,
            self.mass,
            self.light_speed,
            self.field_b3,
            self.lande_g,
            self.kappa_value,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(DynamicsError::InvalidParams("non-finite parameter".into()));
        }
        if self.mass <= 0.0 {
            return Err(DynamicsError::InvalidParams("mass must be positive".into()));
        }
        if self.light_speed <= 0.0 {
            return Err(DynamicsError::InvalidParams(
                "light speed must be positive".into(),
            ));
        }
        if self.kappa_value <= 0.0 {
            return Err(DynamicsError::InvalidParams(
                "kappa must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Larmor rate `e*B3 / (2*m*c)`.
    pub fn omega0(&self) -> f64 {
        self.charge * self.field_b3 / (2.0 * self.mass * self.light_speed)
    }

    /// Precession rate `g * omega0`.
    pub fn omega1(&self) -> f64 {
        self.lande_g * self.omega0()
    }

    /// `omega1` as an exact rational built from the exact binary values of
    /// the parameters, so symbolic identities stay exact.
    fn omega1_exact(&self) -> Rational {
        let two = BigRational::from_integer(2.into());
        exact(self.lande_g) * exact(self.charge) * exact(self.field_b3)
            / (two * exact(self.mass) * exact(self.light_speed))
    }
}

fn exact(value: f64) -> Rational {
    BigRational::from_float(value).expect("finite parameter")
}

fn real(value: Rational) -> GaussianRational {
    GaussianRational::new(value, Rational::zero())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),
    #[error("initial point does not assign variable {0}")]
    UncoveredVariable(CanonicalVariable),
    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("state diverged to a non-finite value at step {step} (t = {time})")]
    Diverged { step: usize, time: f64 },
}

/// Interaction Hamiltonian `-omega1 * S3`, with the scale symbol fixed to
/// its numeric value. `S3` carries no `k`, so the result is independent of
/// that substitution.
pub fn hamiltonian(params: &PhysicalParams, set: &SpinSet) -> PhasePolynomial {
    let omega1 = params.omega1_exact();
    set.s3
        .scaled(&real(-omega1))
        .substitute_kappa(&exact(params.kappa_value))
}

/// `df/dt = {f, H}`.
pub fn time_derivative(f: &PhasePolynomial, h: &PhasePolynomial) -> PhasePolynomial {
    poisson_bracket(f, h)
}

/// Checks, component by component and exactly, that
/// `{S_i, H} = (g*e / 2*m*c) * (S x B)_i` with the field along the symmetry
/// axis: `(S x B) = (S2*B3, -S1*B3, 0)`.
pub fn verify_vector_form(params: &PhysicalParams, set: &SpinSet) -> Vec<CheckResult> {
    let h = hamiltonian(params, set);
    let factor = {
        let two = BigRational::from_integer(2.into());
        exact(params.lande_g) * exact(params.charge)
            / (two * exact(params.mass) * exact(params.light_speed))
    };
    let b3 = exact(params.field_b3);
    let coefficient = real(factor * b3);

    let cross = [
        set.s2.scaled(&coefficient),
        -set.s1.scaled(&coefficient),
        PhasePolynomial::zero(),
    ];
    (1..=3)
        .zip(cross)
        .map(|(i, claimed)| {
            CheckResult::polynomial(
                format!("eq15.s{i}"),
                &claimed,
                &time_derivative(set.component(i), &h),
            )
        })
        .collect()
}

/// The integrated precession:
/// `S1(t) = S1(0) cos + S2(0) sin`, `S2(t) = -S1(0) sin + S2(0) cos`,
/// `S3(t) = S3(0)`.
pub fn closed_form_precession(
    s1_0: f64,
    s2_0: f64,
    s3_0: f64,
    omega1: f64,
    t: f64,
) -> (f64, f64, f64) {
    let (sin, cos) = (omega1 * t).sin_cos();
    (s1_0 * cos + s2_0 * sin, -s1_0 * sin + s2_0 * cos, s3_0)
}

/// Time series of phase-space points with the derived S-values.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Strictly increasing sample times, starting at 0.
    pub times: Vec<f64>,
    /// Variables of the integrated state, in canonical order.
    pub variables: Vec<CanonicalVariable>,
    /// One state per sample time, columns matching `variables`.
    pub states: Vec<Vec<f64>>,
    /// `(S1, S2, S3, S0)` per sample time.
    pub s_values: Vec<[f64; 4]>,
}

impl Trajectory {
    /// CSV export with header `time,x,y,px,py,S1,S2,S3,S0`, one row per
    /// sample, for the particle the S-values were recorded from.
    pub fn write_csv<W: Write>(&self, particle: u32, mut w: W) -> std::io::Result<()> {
        writeln!(w, "time,x,y,px,py,S1,S2,S3,S0")?;
        let column = |v: CanonicalVariable| self.variables.iter().position(|&w| w == v);
        let cols = [
            column(CanonicalVariable::x(particle)),
            column(CanonicalVariable::y(particle)),
            column(CanonicalVariable::px(particle)),
            column(CanonicalVariable::py(particle)),
        ];
        for (idx, time) in self.times.iter().enumerate() {
            write!(w, "{}", time)?;
            for col in cols {
                match col {
                    Some(c) => write!(w, ",{}", self.states[idx][c])?,
                    None => write!(w, ",0")?,
                }
            }
            let s = self.s_values[idx];
            writeln!(w, ",{},{},{},{}", s[0], s[1], s[2], s[3])?;
        }
        Ok(())
    }
}

/// Integrates Hamilton's equations `dq/dt = dH/dp`, `dp/dt = -dH/dq` with
/// classic fourth-order Runge-Kutta, recording the S-values of `set` at
/// every step. The initial point must assign every variable of `h` and of
/// the spin set.
pub fn integrate_flow(
    h: &PhasePolynomial,
    initial: &BTreeMap<CanonicalVariable, f64>,
    dt: f64,
    steps: usize,
    set: &SpinSet,
    kappa: f64,
) -> Result<Trajectory, DynamicsError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(DynamicsError::NonPositiveStep(dt));
    }
    let mut required = h.variables();
    for poly in [&set.s1, &set.s2, &set.s3, &set.s0] {
        required.extend(poly.variables());
    }
    for v in &required {
        if !initial.contains_key(v) {
            return Err(DynamicsError::UncoveredVariable(*v));
        }
    }

    let variables: Vec<CanonicalVariable> = initial.keys().copied().collect();
    // dstate/dt as polynomials, one per state variable.
    let rates: Vec<PhasePolynomial> = variables
        .iter()
        .map(|&v| {
            if v.is_coordinate() {
                h.partial_derivative(v.conjugate())
            } else {
                -h.partial_derivative(v.conjugate())
            }
        })
        .collect();

    let eval_rates = |state: &[f64], out: &mut Vec<f64>| {
        let point: BTreeMap<CanonicalVariable, f64> = variables
            .iter()
            .copied()
            .zip(state.iter().copied())
            .collect();
        out.clear();
        for rate in &rates {
            // Variables of dH/dv are a subset of the state by construction.
            out.push(rate.evaluate(&point, kappa).expect("state covers H").re);
        }
    };

    let record_s = |state: &[f64]| -> [f64; 4] {
        let point: BTreeMap<CanonicalVariable, f64> = variables
            .iter()
            .copied()
            .zip(state.iter().copied())
            .collect();
        let value = |p: &PhasePolynomial| p.evaluate(&point, kappa).expect("state covers S").re;
        [
            value(&set.s1),
            value(&set.s2),
            value(&set.s3),
            value(&set.s0),
        ]
    };

    let dim = variables.len();
    let mut state: Vec<f64> = variables.iter().map(|v| initial[v]).collect();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut s_values = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(state.clone());
    s_values.push(record_s(&state));

    let mut k1 = Vec::with_capacity(dim);
    let mut k2 = Vec::with_capacity(dim);
    let mut k3 = Vec::with_capacity(dim);
    let mut k4 = Vec::with_capacity(dim);
    let mut scratch = vec![0.0; dim];

    for step in 1..=steps {
        eval_rates(&state, &mut k1);
        for i in 0..dim {
            scratch[i] = state[i] + 0.5 * dt * k1[i];
        }
        eval_rates(&scratch, &mut k2);
        for i in 0..dim {
            scratch[i] = state[i] + 0.5 * dt * k2[i];
        }
        eval_rates(&scratch, &mut k3);
        for i in 0..dim {
            scratch[i] = state[i] + dt * k3[i];
        }
        eval_rates(&scratch, &mut k4);
        for i in 0..dim {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let time = step as f64 * dt;
        if state.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::Diverged { step, time });
        }
        times.push(time);
        states.push(state.clone());
        s_values.push(record_s(&state));
    }

    Ok(Trajectory {
        times,
        variables,
        states,
        s_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gauss_int;
    use crate::parser::canonical_text;

    fn default_point() -> BTreeMap<CanonicalVariable, f64> {
        BTreeMap::from([
            (CanonicalVariable::x(1), 1.0),
            (CanonicalVariable::y(1), 0.0),
            (CanonicalVariable::px(1), 0.0),
            (CanonicalVariable::py(1), 0.0),
        ])
    }

    #[test]
    fn zero_field_gives_zero_hamiltonian() {
        let params = PhysicalParams {
            field_b3: 0.0,
            ..Default::default()
        };
        assert!(hamiltonian(&params, &SpinSet::new(1)).is_zero());
    }

    #[test]
    fn unit_larmor_rate_gives_minus_two_s3() {
        // omega0 = 1 requires B3 = 2 in the default unit system.
        let params = PhysicalParams {
            field_b3: 2.0,
            ..Default::default()
        };
        assert_eq!(params.omega0(), 1.0);
        let set = SpinSet::new(1);
        let h = hamiltonian(&params, &set);
        assert_eq!(h, set.s3.scaled(&gauss_int(-2)));
    }

    #[test]
    fn hamiltonian_is_kappa_independent() {
        let set = SpinSet::new(1);
        let a = hamiltonian(&PhysicalParams::default(), &set);
        let b = hamiltonian(
            &PhysicalParams {
                kappa_value: 3.5,
                ..Default::default()
            },
            &set,
        );
        assert_eq!(a, b);
    }

    #[test]
    fn symbolic_equations_of_motion() {
        let params = PhysicalParams::default(); // omega1 = 1
        let set = SpinSet::new(1);
        let h = hamiltonian(&params, &set);
        assert_eq!(time_derivative(&set.s1, &h), set.s2);
        assert_eq!(time_derivative(&set.s2, &h), -set.s1.clone());
        assert!(time_derivative(&set.s3, &h).is_zero());
    }

    #[test]
    fn vector_form_holds_exactly_for_all_components() {
        let results = verify_vector_form(&PhysicalParams::default(), &SpinSet::new(1));
        assert_eq!(results.len(), 3);
        for r in &results {
            assert!(r.is_verified(), "{}: {}", r.claim_id, r.computed);
        }
        // Also with less convenient constants.
        let odd = PhysicalParams {
            charge: 0.75,
            mass: 1.5,
            light_speed: 2.0,
            field_b3: -0.3,
            lande_g: 2.0,
            kappa_value: 1.0,
        };
        assert!(verify_vector_form(&odd, &SpinSet::new(1))
            .iter()
            .all(|r| r.is_verified()));
    }

    #[test]
    fn closed_form_at_zero_and_quarter_period() {
        let (s1, s2, s3) = closed_form_precession(0.3, -0.8, 0.25, 1.0, 0.0);
        assert_eq!((s1, s2, s3), (0.3, -0.8, 0.25));

        let (s1, s2, s3) =
            closed_form_precession(0.3, -0.8, 0.25, 1.0, std::f64::consts::FRAC_PI_2);
        assert!((s1 - (-0.8)).abs() < 1e-15);
        assert!((s2 - (-0.3)).abs() < 1e-15);
        assert_eq!(s3, 0.25);
    }

    #[test]
    fn closed_form_preserves_the_plane_radius() {
        for step in 0..10 {
            let t = step as f64 * 0.7;
            let (s1, s2, _) = closed_form_precession(0.3, -0.8, 0.0, 2.0, t);
            let r2 = s1 * s1 + s2 * s2;
            assert!((r2 - (0.09 + 0.64)).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_hamiltonian_gives_a_constant_trajectory() {
        let set = SpinSet::new(1);
        let traj = integrate_flow(
            &PhasePolynomial::zero(),
            &default_point(),
            0.1,
            5,
            &set,
            1.0,
        )
        .unwrap();
        assert_eq!(traj.times.len(), 6);
        for state in &traj.states {
            assert_eq!(state, &traj.states[0]);
        }
    }

    #[test]
    fn missing_variable_is_reported() {
        let set = SpinSet::new(1);
        let mut point = default_point();
        point.remove(&CanonicalVariable::py(1));
        let err = integrate_flow(&PhasePolynomial::zero(), &point, 0.1, 1, &set, 1.0).unwrap_err();
        assert_eq!(
            err,
            DynamicsError::UncoveredVariable(CanonicalVariable::py(1))
        );
    }

    #[test]
    fn rk4_tracks_the_closed_form_over_one_period() {
        let params = PhysicalParams::default(); // omega1 = 1
        let set = SpinSet::new(1);
        let h = hamiltonian(&params, &set);
        let traj = integrate_flow(&h, &default_point(), 1e-3, 6283, &set, 1.0).unwrap();

        let [s1_0, s2_0, s3_0, s0_0] = traj.s_values[0];
        let scale = 1.0f64.max((s1_0 * s1_0 + s2_0 * s2_0 + s3_0 * s3_0).sqrt());
        let mut worst: f64 = 0.0;
        for (idx, t) in traj.times.iter().enumerate() {
            let (c1, c2, c3) = closed_form_precession(s1_0, s2_0, s3_0, params.omega1(), *t);
            let [n1, n2, n3, _] = traj.s_values[idx];
            worst = worst
                .max((n1 - c1).abs())
                .max((n2 - c2).abs())
                .max((n3 - c3).abs());
        }
        assert!(worst / scale < 1e-8, "worst deviation {worst}");

        // S3 and S0 are conserved along the flow.
        let drift3 = traj
            .s_values
            .iter()
            .map(|s| (s[2] - s3_0).abs())
            .fold(0.0f64, f64::max);
        let drift0 = traj
            .s_values
            .iter()
            .map(|s| (s[3] - s0_0).abs())
            .fold(0.0f64, f64::max);
        assert!(drift3 / 1.0f64.max(s3_0.abs()) <= 1e-8);
        assert!(drift0 / 1.0f64.max(s0_0.abs()) <= 1e-8);
    }

    #[test]
    fn runaway_flow_reports_divergence_with_the_step() {
        // H = x^2 * px has dx/dt = x^2; with a coarse step the state
        // squares its way to overflow in a few dozen iterations.
        let x = PhasePolynomial::variable(CanonicalVariable::x(1));
        let px = PhasePolynomial::variable(CanonicalVariable::px(1));
        let h = &(&x * &x) * &px;
        let set = SpinSet::new(1);
        let err = integrate_flow(&h, &default_point(), 1.0, 10_000, &set, 1.0).unwrap_err();
        match err {
            DynamicsError::Diverged { step, .. } => assert!(step > 0 && step < 200),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn csv_has_the_documented_header_and_row_count() {
        let set = SpinSet::new(1);
        let h = hamiltonian(&PhysicalParams::default(), &set);
        let traj = integrate_flow(&h, &default_point(), 0.1, 3, &set, 1.0).unwrap();
        let mut buffer = Vec::new();
        traj.write_csv(1, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "time,x,y,px,py,S1,S2,S3,S0");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn hamiltonian_prints_cleanly_at_default_params() {
        let set = SpinSet::new(1);
        let h = hamiltonian(&PhysicalParams::default(), &set);
        assert_eq!(canonical_text(&h), "-1/2*x1*py1 + 1/2*y1*px1");
    }
}
