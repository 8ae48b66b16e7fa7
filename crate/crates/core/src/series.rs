//! Truncated power series with `f64` coefficients.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// `sum_k c[k] x^k`, truncated after `order` (inclusive).
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    c: Vec<f64>,
}

impl Series {
    pub fn new(mut c: Vec<f64>, order: usize) -> Self {
        c.resize(order + 1, 0.0);
        Series { c }
    }

    pub fn zero(order: usize) -> Self {
        Series {
            c: vec![0.0; order + 1],
        }
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.c[0] = v;
        s
    }

    /// The variable `x` itself.
    pub fn variable(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.c[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.c.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    pub fn add(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        Series {
            c: (0..=n).map(|k| self.c[k] + o.c[k]).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Series {
        Series {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut c = vec![0.0; n + 1];
        for (i, a) in self.c.iter().enumerate().take(n + 1) {
            for (j, b) in o.c.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Series { c }
    }

    /// `self / x^k`, assuming the first `k` coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Series {
        Series {
            c: self.c[k..].to_vec(),
        }
    }

    /// `self^p` for `c[0] > 0` via the J.C.P. Miller recurrence.
    pub fn powf(&self, p: f64) -> Series {
        let a0 = self.c[0];
        assert!(a0 > 0.0, "powf needs a positive constant term");
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = a0.powf(p);
        for k in 1..=n {
            let mut s = 0.0;
            for j in 1..=k {
                s += (p * j as f64 - (k - j) as f64) * self.c[j] * b[k - j];
            }
            b[k] = s / (k as f64 * a0);
        }
        Series { c: b }
    }

    pub fn recip(&self) -> Series {
        let a0 = self.c[0];
        assert!(a0 != 0.0, "recip needs a non-zero constant term");
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = 1.0 / a0;
        for k in 1..=n {
            let s: f64 = (1..=k).map(|j| self.c[j] * b[k - j]).sum();
            b[k] = -s / a0;
        }
        Series { c: b }
    }

    /// Antiderivative vanishing at 0; the order grows by one.
    pub fn integrate(&self) -> Series {
        let mut c = vec![0.0; self.c.len() + 1];
        for (k, a) in self.c.iter().enumerate() {
            c[k + 1] = a / (k + 1) as f64;
        }
        Series { c }
    }

    pub fn derivative(&self) -> Series {
        if self.c.len() == 1 {
            return Series::zero(0);
        }
        Series {
            c: (1..self.c.len()).map(|k| k as f64 * self.c[k]).collect(),
        }
    }

    /// `self(g(x))` for `g(0) = 0`.
    pub fn compose(&self, g: &Series) -> Series {
        assert!(g.c[0] == 0.0, "inner series must vanish at 0");
        let n = self.order().min(g.order());
        let g = Series {
            c: g.c[..=n].to_vec(),
        };
        let mut out = Series::constant(self.c[n], n);
        for k in (0..n).rev() {
            out = out.mul(&g);
            out.c[0] += self.c[k];
        }
        out
    }

    /// Compositional inverse of a series `x + O(x^2)`.
    pub fn revert(&self) -> Series {
        assert!(
            self.c[0] == 0.0 && self.c[1] != 0.0,
            "revert needs x + O(x^2)"
        );
        let n = self.order();
        let x = Series::variable(n);
        let mut inv = x.scale(1.0 / self.c[1]);
        for _ in 0..n {
            // inv <- inv - (self(inv) - x) / self'(0), one order per sweep.
            let r = self.compose(&inv).add(&x.scale(-1.0));
            inv = inv.add(&r.scale(-1.0 / self.c[1]));
        }
        inv
    }
}

/// `sinh(x)/x` as a series in `x`.
pub fn sinhc(order: usize) -> Series {
    let mut c = vec![0.0; order + 1];
    let mut f = 1.0;
    for k in (0..=order).step_by(2) {
        c[k] = 1.0 / f;
        f *= ((k + 2) * (k + 3)) as f64;
    }
    Series { c }
}
