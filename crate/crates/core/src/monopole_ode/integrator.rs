//! Dormand-Prince 5(4) with step-size control and continuous output.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen automatically when zero.
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 0.0,
            h_max: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

impl StepControl {
    pub fn with_tol(rtol: f64, atol: f64) -> Self {
        StepControl {
            rtol,
            atol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0) || !(self.atol >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                value: self.rtol,
            });
        }
        Ok(())
    }
}

/// One accepted step and its quartic interpolant.
#[derive(Clone, Copy, Debug)]
struct Segment<const N: usize> {
    x0: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> Segment<N> {
    fn eval(&self, x: f64) -> [f64; N] {
        let s = (x - self.x0) / self.h;
        let s1 = 1.0 - s;
        let r = &self.r;
        core::array::from_fn(|i| {
            r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])))
        })
    }
}

/// Accepted nodes of an integration with dense output between them.
#[derive(Clone, Debug)]
pub struct Trajectory<const N: usize> {
    xs: Vec<f64>,
    ys: Vec<[f64; N]>,
    segments: Vec<Segment<N>>,
    rejected: usize,
    evaluations: usize,
    stopped: bool,
}

impl<const N: usize> Trajectory<N> {
    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn states(&self) -> &[[f64; N]] {
        &self.ys
    }

    pub fn start(&self) -> f64 {
        self.xs[0]
    }

    pub fn end(&self) -> f64 {
        *self.xs.last().expect("non-empty")
    }

    pub fn last(&self) -> [f64; N] {
        *self.ys.last().expect("non-empty")
    }

    pub fn steps(&self) -> usize {
        self.segments.len()
    }

    pub fn rejected(&self) -> usize {
        self.rejected
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Whether the stop predicate ended the run before `x_end`.
    pub fn stopped(&self) -> bool {
        self.stopped
    }

    /// Dense output; `None` outside `[start, end]`.
    pub fn eval(&self, x: f64) -> Option<[f64; N]> {
        if self.segments.is_empty() {
            return (x == self.start()).then(|| self.ys[0]);
        }
        if !(x >= self.start() && x <= self.end()) {
            return None;
        }
        let k = self.xs.partition_point(|&xi| xi <= x);
        let i = k.saturating_sub(1).min(self.segments.len() - 1);
        Some(self.segments[i].eval(x))
    }

    /// Largest `|g|` over the accepted nodes.
    pub fn max_over_nodes(&self, mut g: impl FnMut(f64, &[f64; N]) -> f64) -> f64 {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(&x, y)| g(x, y).abs())
            .fold(0.0, f64::max)
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    core::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

fn initial_step<const N: usize, F>(
    f: &mut F,
    x0: f64,
    y0: &[f64; N],
    k1: &[f64; N],
    ctl: &StepControl,
    span: f64,
) -> Result<f64>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let scale: [f64; N] = core::array::from_fn(|i| ctl.atol + ctl.rtol * y0[i].abs());
    let norm = |v: &[f64; N]| {
        (v.iter()
            .zip(&scale)
            .map(|(a, s)| (a / s) * (a / s))
            .sum::<f64>()
            / N as f64)
            .sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(k1);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(span.abs());
    let y1 = axpy(y0, h0, &[(1.0, k1)]);
    let k2 = f(x0 + h0, &y1)?;
    let diff: [f64; N] = core::array::from_fn(|i| k2[i] - k1[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(span.abs()).min(ctl.h_max))
}

/// Integrate `y' = f(x, y)` from `(x0, y0)` towards `x_end > x0`.
///
/// `stop` is checked after each accepted step and ends the run early when it
/// returns `true`.
pub fn integrate<const N: usize, F, S>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    x_end: f64,
    ctl: &StepControl,
    mut stop: S,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    S: FnMut(f64, &[f64; N]) -> bool,
{
    ctl.validate()?;
    if !(x_end > x0) {
        return Err(Error::InvalidParameter {
            name: "x_end",
            value: x_end,
        });
    }
    if !finite(&y0) {
        return Err(Error::NonFinite { x: x0 });
    }
    let mut traj = Trajectory {
        xs: alloc::vec![x0],
        ys: alloc::vec![y0],
        segments: Vec::new(),
        rejected: 0,
        evaluations: 0,
        stopped: false,
    };
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y)?;
    traj.evaluations += 1;
    let mut h = if ctl.h_init > 0.0 {
        ctl.h_init
    } else {
        traj.evaluations += 1;
        initial_step(&mut f, x0, &y0, &k1, ctl, x_end - x0)?
    };
    let h_floor = 16.0 * f64::EPSILON;
    let mut last_reject = false;

    while x < x_end {
        if traj.segments.len() >= ctl.max_steps {
            return Err(Error::StepBudget { x });
        }
        let last = x + h >= x_end;
        if last {
            h = x_end - x;
        }
        if h <= h_floor * x.abs().max(1.0) {
            return Err(Error::StepUnderflow { x, h });
        }

        let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
        let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = f(
            x + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )?;
        let k5 = f(
            x + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = f(
            x + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )?;
        let y1 = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let x1 = if last { x_end } else { x + h };
        traj.evaluations += 5;
        if !finite(&y1) {
            traj.rejected += 1;
            h *= 0.1;
            if h <= h_floor * x.abs().max(1.0) {
                return Err(Error::NonFinite { x });
            }
            continue;
        }
        let k7 = f(x1, &y1)?;
        traj.evaluations += 1;
        if !finite(&k7) {
            traj.rejected += 1;
            h *= 0.1;
            if h <= h_floor * x.abs().max(1.0) {
                return Err(Error::NonFinite { x });
            }
            continue;
        }

        let mut err = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = ctl.atol + ctl.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();

        if err <= 1.0 {
            let mut r = [[0.0; N]; 5];
            for i in 0..N {
                let dy = y1[i] - y[i];
                let bspl = h * k1[i] - dy;
                r[0][i] = y[i];
                r[1][i] = dy;
                r[2][i] = bspl;
                r[3][i] = dy - h * k7[i] - bspl;
                r[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            traj.segments.push(Segment { x0: x, h, r });
            traj.xs.push(x1);
            traj.ys.push(y1);
            x = x1;
            y = y1;
            k1 = k7;
            if stop(x, &y) {
                traj.stopped = true;
                break;
            }
            let mut fac = if err == 0.0 {
                10.0
            } else {
                0.9 * err.powf(-0.2)
            };
            fac = fac.clamp(0.2, 10.0);
            if last_reject {
                fac = fac.min(1.0);
            }
            last_reject = false;
            h = (h * fac).min(ctl.h_max);
        } else {
            traj.rejected += 1;
            last_reject = true;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], -y[0]])
    }

    #[test]
    fn harmonic_oscillator_nodes_and_dense_output() {
        let ctl = StepControl::with_tol(1e-12, 1e-14);
        let tr = integrate(oscillator, 0.0, [0.0, 1.0], 10.0, &ctl, |_, _| false).unwrap();
        assert_eq!(tr.end(), 10.0);
        let y = tr.last();
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        for k in 0..=1000 {
            let x = 0.01 * k as f64;
            let y = tr.eval(x).unwrap();
            assert!((y[0] - x.sin()).abs() < 1e-10, "x = {x}");
            assert!((y[1] - x.cos()).abs() < 1e-10, "x = {x}");
        }
        assert!(tr.eval(10.5).is_none());
    }

    #[test]
    fn tolerance_controls_error() {
        let mut last = f64::INFINITY;
        for tol in [1e-6, 1e-8, 1e-10] {
            let tr = integrate(
                oscillator,
                0.0,
                [0.0, 1.0],
                5.0,
                &StepControl::with_tol(tol, tol),
                |_, _| false,
            )
            .unwrap();
            let e = (tr.last()[0] - 5f64.sin()).abs();
            assert!(e < 100.0 * tol);
            assert!(e < last);
            last = e;
        }
    }

    #[test]
    fn stop_predicate_ends_early() {
        let tr = integrate(
            |_, y: &[f64; 1]| Ok([-y[0]]),
            0.0,
            [1.0],
            100.0,
            &StepControl::default(),
            |_, y| y[0] < 1e-3,
        )
        .unwrap();
        assert!(tr.stopped());
        assert!(tr.end() < 100.0);
        assert!(tr.last()[0] < 1e-3);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y^2 explodes at x = 1.
        let r = integrate(
            |_, y: &[f64; 1]| Ok([y[0] * y[0]]),
            0.0,
            [1.0],
            2.0,
            &StepControl::default(),
            |_, _| false,
        );
        assert!(matches!(
            r,
            Err(Error::StepUnderflow { .. }) | Err(Error::NonFinite { .. })
        ));
        if let Err(Error::StepUnderflow { x, .. }) | Err(Error::NonFinite { x }) = r {
            assert!((x - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn constant_solution_is_exact() {
        let tr = integrate(
            |_, _: &[f64; 2]| Ok([0.0, 0.0]),
            0.1,
            [1.0, 0.0],
            50.0,
            &StepControl::default(),
            |_, _| false,
        )
        .unwrap();
        assert!(tr.states().iter().all(|y| *y == [1.0, 0.0]));
    }

    #[test]
    fn rejects_bad_input() {
        let ctl = StepControl::with_tol(0.0, 0.0);
        assert!(integrate(oscillator, 0.0, [0.0, 1.0], 1.0, &ctl, |_, _| false).is_err());
        assert!(integrate(
            oscillator,
            1.0,
            [0.0, 1.0],
            1.0,
            &StepControl::default(),
            |_, _| false
        )
        .is_err());
        assert!(integrate(
            oscillator,
            0.0,
            [f64::NAN, 1.0],
            1.0,
            &StepControl::default(),
            |_, _| false
        )
        .is_err());
    }
}
