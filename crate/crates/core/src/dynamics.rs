//! Fixed-step RK4 integration of Hamilton's equations
//! `dx^{pi}/dt = -∂H^p/∂y^i`, `dy^i/dt = a_i(y)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{hamiltonian_field, FoliateField, ModelManifold, PolarizedHamiltonian};

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    /// `x^{pi}` row-major, `k·n` entries.
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl State {
    pub fn new(manifold: ModelManifold, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let s = State { x, y };
        s.check(manifold)?;
        Ok(s)
    }

    pub fn zero(manifold: ModelManifold) -> Self {
        State {
            x: vec![0.0; manifold.k() * manifold.n()],
            y: vec![0.0; manifold.n()],
        }
    }

    fn check(&self, manifold: ModelManifold) -> Result<()> {
        if self.x.len() != manifold.k() * manifold.n() {
            return Err(Error::Arity {
                expected: manifold.k() * manifold.n(),
                actual: self.x.len(),
            });
        }
        if self.y.len() != manifold.n() {
            return Err(Error::Arity {
                expected: manifold.n(),
                actual: self.y.len(),
            });
        }
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }

    fn axpy(&self, h: f64, d: &State) -> State {
        State {
            x: self.x.iter().zip(&d.x).map(|(a, b)| a + h * b).collect(),
            y: self.y.iter().zip(&d.y).map(|(a, b)| a + h * b).collect(),
        }
    }
}

/// Right-hand side of Hamilton's equations, with `X_H` computed once.
#[derive(Clone, Debug)]
pub struct HamiltonRhs {
    manifold: ModelManifold,
    field: FoliateField,
}

impl HamiltonRhs {
    pub fn new(h: &PolarizedHamiltonian) -> Result<Self> {
        Ok(HamiltonRhs {
            manifold: h.manifold(),
            field: hamiltonian_field(h)?,
        })
    }

    pub fn eval(&self, s: &State) -> Result<State> {
        s.check(self.manifold)?;
        let (x, y) = self.field.eval_f64(&s.x, &s.y)?;
        Ok(State { x, y })
    }
}

/// `(dx/dt, dy/dt)` at `s`.
pub fn hamilton_rhs(h: &PolarizedHamiltonian, s: &State) -> Result<State> {
    HamiltonRhs::new(h)?.eval(s)
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    hamiltonian: PolarizedHamiltonian,
    dt: f64,
    times: Vec<f64>,
    states: Vec<State>,
    overflow: bool,
}

impl Trajectory {
    pub fn hamiltonian(&self) -> &PolarizedHamiltonian {
        &self.hamiltonian
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn last(&self) -> (f64, &State) {
        let i = self.times.len() - 1;
        (self.times[i], &self.states[i])
    }

    /// True if integration stopped early on a non-finite state.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    /// `t,x_1_1,...,x_k_n,y_1,...,y_n,H_1,...,H_k`, one row per step.
    pub fn to_csv(&self) -> Result<String> {
        let m = self.hamiltonian.manifold();
        let mut header = vec!["t".to_string()];
        for p in 0..m.k() {
            for i in 0..m.n() {
                header.push(m.x_name(p, i));
            }
        }
        header.extend((1..=m.n()).map(|i| format!("y_{i}")));
        header.extend((1..=m.k()).map(|p| format!("H_{p}")));
        let mut out = header.join(",");
        out.push('\n');
        for (t, s) in self.times.iter().zip(&self.states) {
            let h = self.hamiltonian.eval_f64(&s.x, &s.y)?;
            let row: Vec<String> = std::iter::once(*t)
                .chain(s.x.iter().copied())
                .chain(s.y.iter().copied())
                .chain(h)
                .map(|v| if v == 0.0 { "0".to_string() } else { v.to_string() })
                .collect();
            writeln!(out, "{}", row.join(",")).expect("writing to a String");
        }
        Ok(out)
    }
}

/// Classical RK4 from `t = 0` to `t_end`. Steps land on `i·dt`; a final
/// shorter step lands exactly on `t_end`.
pub fn rk4_flow(h: &PolarizedHamiltonian, s0: &State, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Integration(format!("dt must be positive, got {dt}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Integration(format!("t_end must be positive, got {t_end}")));
    }
    if dt > t_end {
        return Err(Error::Integration(format!("dt = {dt} exceeds t_end = {t_end}")));
    }
    let rhs = HamiltonRhs::new(h)?;
    s0.check(h.manifold())?;

    let ratio = t_end / dt;
    let nearest = ratio.round();
    let (full, exact) = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
        (nearest as usize, true)
    } else {
        (ratio.floor() as usize, false)
    };

    let mut times = Vec::with_capacity(full + 2);
    let mut states = Vec::with_capacity(full + 2);
    times.push(0.0);
    states.push(s0.clone());
    let mut overflow = false;
    let total = if exact { full } else { full + 1 };
    for step in 0..total {
        let t_prev = times[step];
        let t_next = if step + 1 == total {
            t_end
        } else {
            (step + 1) as f64 * dt
        };
        let h_step = t_next - t_prev;
        let s = &states[step];
        let next = match rk4_step(&rhs, s, h_step) {
            Ok(n) if n.is_finite() => n,
            Ok(_) | Err(Error::NonFinite) => {
                overflow = true;
                break;
            }
            Err(e) => return Err(e),
        };
        times.push(t_next);
        states.push(next);
    }
    Ok(Trajectory {
        hamiltonian: h.clone(),
        dt,
        times,
        states,
        overflow,
    })
}

fn rk4_step(rhs: &HamiltonRhs, s: &State, h: f64) -> Result<State> {
    let k1 = rhs.eval(s)?;
    let k2 = rhs.eval(&s.axpy(h / 2.0, &k1))?;
    let k3 = rhs.eval(&s.axpy(h / 2.0, &k2))?;
    let k4 = rhs.eval(&s.axpy(h, &k3))?;
    let w = h / 6.0;
    Ok(State {
        x: (0..s.x.len())
            .map(|i| s.x[i] + w * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]))
            .collect(),
        y: (0..s.y.len())
            .map(|i| s.y[i] + w * (k1.y[i] + 2.0 * k2.y[i] + 2.0 * k3.y[i] + k4.y[i]))
            .collect(),
    })
}

/// `max_t |H^p(t) - H^p(0)|` for each component `p`.
pub fn conservation_report(traj: &Trajectory) -> Result<Vec<f64>> {
    let h = &traj.hamiltonian;
    let first = &traj.states[0];
    let h0 = h.eval_f64(&first.x, &first.y)?;
    let mut drift = vec![0.0f64; h0.len()];
    for s in &traj.states[1..] {
        let hv = h.eval_f64(&s.x, &s.y)?;
        for ((d, v), v0) in drift.iter_mut().zip(&hv).zip(&h0) {
            *d = d.max((v - v0).abs());
        }
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{parse_poly, Poly};

    fn xy() -> PolarizedHamiltonian {
        let m = ModelManifold::new(1, 1).unwrap();
        PolarizedHamiltonian::new(m, vec![Poly::var(1, 0)], vec![Poly::zero(1)]).unwrap()
    }

    fn y_only() -> PolarizedHamiltonian {
        let m = ModelManifold::new(1, 1).unwrap();
        PolarizedHamiltonian::new(m, vec![Poly::zero(1)], vec![Poly::var(1, 0)]).unwrap()
    }

    fn one_one() -> State {
        State { x: vec![1.0], y: vec![1.0] }
    }

    #[test]
    fn rhs_examples() {
        let d = hamilton_rhs(&y_only(), &State { x: vec![3.0], y: vec![2.0] }).unwrap();
        assert_eq!(d, State { x: vec![-1.0], y: vec![0.0] });
        let d = hamilton_rhs(&xy(), &State { x: vec![3.0], y: vec![2.0] }).unwrap();
        assert_eq!(d, State { x: vec![-3.0], y: vec![2.0] });
        let m = ModelManifold::new(2, 2).unwrap();
        let c = PolarizedHamiltonian::zero(m);
        let d = hamilton_rhs(&c, &State::new(m, vec![1.0; 4], vec![2.0; 2]).unwrap()).unwrap();
        assert_eq!(d, State::zero(m));
    }

    #[test]
    fn constant_rhs_is_exact() {
        let tr = rk4_flow(&y_only(), &State { x: vec![0.0], y: vec![0.0] }, 1.0, 0.1).unwrap();
        let (t, s) = tr.last();
        assert_eq!(t, 1.0);
        assert!((s.x[0] + 1.0).abs() < 1e-14);
        assert_eq!(conservation_report(&tr).unwrap(), vec![0.0]);
    }

    #[test]
    fn grid_and_final_partial_step() {
        let tr = rk4_flow(&xy(), &one_one(), 1.0, 0.3).unwrap();
        let t = tr.times();
        assert_eq!(t.len(), 5);
        assert_eq!(t[3], 3.0 * 0.3);
        assert_eq!(*t.last().unwrap(), 1.0);
        let tr = rk4_flow(&xy(), &one_one(), 1.0, 1e-3).unwrap();
        assert_eq!(tr.times().len(), 1001);
        assert!(tr.times().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn exponential_accuracy() {
        let tr = rk4_flow(&xy(), &one_one(), 1.0, 1e-3).unwrap();
        let (_, s) = tr.last();
        assert!((s.x[0] - (-1.0f64).exp()).abs() <= 1e-10);
        assert!((s.y[0] - 1.0f64.exp()).abs() <= 1e-10);
        assert!(conservation_report(&tr).unwrap()[0] <= 1e-9);
    }

    #[test]
    fn fourth_order_in_truncation_regime() {
        let err_and_drift = |dt: f64| {
            let tr = rk4_flow(&xy(), &one_one(), 1.0, dt).unwrap();
            let (_, s) = tr.last();
            let err = (s.x[0] - (-1.0f64).exp()).abs().max((s.y[0] - 1.0f64.exp()).abs());
            (err, conservation_report(&tr).unwrap()[0])
        };
        let (e1, d1) = err_and_drift(0.1);
        let (e2, d2) = err_and_drift(0.05);
        let er = e1 / e2;
        assert!((8.0..=32.0).contains(&er), "error ratio {er}");
        // x·y picks up a factor 1 + h⁶/72 + h⁸/576 per step, so the drift is O(h⁵).
        let dr = d1 / d2;
        assert!((31.0..=33.0).contains(&dr), "drift ratio {dr}");
    }

    #[test]
    fn y_subsystem_is_autonomous() {
        let m = ModelManifold::new(2, 2).unwrap();
        let names = m.y_names();
        let p = |s: &str| parse_poly(s, &names).unwrap();
        let h = PolarizedHamiltonian::new(m, vec![p("y1*y2"), p("1 - y1")], vec![p("y2"), p("y1^2")])
            .unwrap();
        let a = hamilton_rhs(&h, &State::new(m, vec![0.0; 4], vec![0.5, -1.0]).unwrap()).unwrap();
        let b = hamilton_rhs(&h, &State::new(m, vec![7.0, -2.0, 3.0, 1.0], vec![0.5, -1.0]).unwrap())
            .unwrap();
        assert_eq!(a.y, b.y);
        assert_ne!(a.x, b.x);
    }

    #[test]
    fn y_follows_the_leaf_space_flow() {
        let m = ModelManifold::new(1, 2).unwrap();
        let names = m.y_names();
        let p = |s: &str| parse_poly(s, &names).unwrap();
        let h = PolarizedHamiltonian::new(m, vec![p("-y2"), p("y1")], vec![p("y1*y2")]).unwrap();
        let s0 = State::new(m, vec![0.3, -0.2], vec![1.0, 0.0]).unwrap();
        let tr = rk4_flow(&h, &s0, 1.0, 0.01).unwrap();
        // the reduced system y1' = -y2, y2' = y1 on its own
        let f = |y: [f64; 2]| [-y[1], y[0]];
        let mut y = [1.0, 0.0];
        let dt = 0.01;
        for _ in 0..100 {
            let k1 = f(y);
            let k2 = f([y[0] + dt / 2.0 * k1[0], y[1] + dt / 2.0 * k1[1]]);
            let k3 = f([y[0] + dt / 2.0 * k2[0], y[1] + dt / 2.0 * k2[1]]);
            let k4 = f([y[0] + dt * k3[0], y[1] + dt * k3[1]]);
            for i in 0..2 {
                y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        let (_, s) = tr.last();
        assert!((s.y[0] - y[0]).abs() < 1e-10 && (s.y[1] - y[1]).abs() < 1e-10);
    }

    #[test]
    fn blow_up_truncates() {
        let m = ModelManifold::new(1, 1).unwrap();
        let h = PolarizedHamiltonian::new(m, vec![parse_poly("y1^2", &["y1"]).unwrap()], vec![Poly::zero(1)])
            .unwrap();
        // y' = y², y(0) = 1 blows up at t = 1
        let tr = rk4_flow(&h, &one_one(), 5.0, 0.01).unwrap();
        assert!(tr.overflowed());
        assert!(tr.states().iter().all(State::is_finite));
        assert!(tr.last().0 < 5.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let h = xy();
        assert!(rk4_flow(&h, &one_one(), 1.0, 0.0).is_err());
        assert!(rk4_flow(&h, &one_one(), 0.0, 0.1).is_err());
        assert!(rk4_flow(&h, &one_one(), 1.0, 2.0).is_err());
        assert!(rk4_flow(&h, &State { x: vec![f64::NAN], y: vec![0.0] }, 1.0, 0.1).is_err());
        assert!(rk4_flow(&h, &State { x: vec![], y: vec![0.0] }, 1.0, 0.1).is_err());
    }

    #[test]
    fn csv_layout() {
        let m = ModelManifold::new(2, 1).unwrap();
        let tr = rk4_flow(&PolarizedHamiltonian::zero(m), &State::zero(m), 0.2, 0.1).unwrap();
        let csv = tr.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x_1_1,x_2_1,y_1,H_1,H_2");
        assert_eq!(lines[1], "0,0,0,0,0,0");
        assert_eq!(lines.len(), 4);
    }
}
