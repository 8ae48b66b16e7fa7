//! Expansion of `psi = h^2 / rho^2` about the zero section.
//!
//! With `rhohat = 2 rho / eps^(2/3)` one has `rhohat = P(t)`, where
//! `P' = K^(-1/3) sinh t / t` and `K = 3 k / (2 t^3)`, while
//! `h^2 = (eps^(4/3) / 4) t sinh t K^(1/3)`. Reverting `P` gives `psi` as an
//! even series in `rho`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::series::{sinhc, Series};

/// `K(t) = 3 k(t) / (2 t^3)` to the given order.
fn k_normalised(order: usize) -> Series {
    let mut c = alloc::vec![0.0; order + 1];
    // k = sum_{n>=1} 4^n t^(2n+1) / (2n+1)!
    let mut fact = 6.0;
    let mut pow4 = 4.0;
    let mut n = 1;
    while 2 * n - 2 <= order {
        c[2 * n - 2] = 1.5 * pow4 / fact;
        fact *= ((2 * n + 2) * (2 * n + 3)) as f64;
        pow4 *= 4.0;
        n += 1;
    }
    Series::new(c, order)
}

/// `P(t)` with `rhohat = P(t)`.
pub fn rho_hat_series(order: usize) -> Series {
    let k = k_normalised(order);
    k.powf(-1.0 / 3.0).mul(&sinhc(order)).integrate()
}

/// Coefficients `c_j` of `psi(rho) = sum_j c_j rho^(2j)`, `j < terms`.
pub fn psi_series(epsilon: f64, terms: usize) -> Vec<f64> {
    let order = 2 * terms + 1;
    let t_of = rho_hat_series(order).revert();
    let s = sinhc(order).mul(&k_normalised(order).powf(1.0 / 3.0));
    let ratio = t_of.shift_down(1);
    let psi_hat = ratio.mul(&ratio).mul(&s.compose(&t_of));
    let scale = (2.0 / epsilon.powf(2.0 / 3.0)).powi(2);
    (0..terms)
        .map(|j| psi_hat.coeff(2 * j) * scale.powi(j as i32))
        .collect()
}

/// `sum_j c_j x^(2j)` and its `x`-derivative.
pub fn even_series(c: &[f64], x: f64) -> (f64, f64) {
    let x2 = x * x;
    let mut v = 0.0;
    let mut d = 0.0;
    for (j, cj) in c.iter().enumerate().rev() {
        v = v * x2 + cj;
        if j > 0 {
            d = d * x2 + 2.0 * j as f64 * cj;
        }
    }
    (v, d * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stenzel_geometry::{k_of_t, rho_of_t, RadialPoint};

    // Exact rationals from an independent symbolic expansion.
    const PSI_HAT: [f64; 5] = [
        1.0,
        1.0 / 6.0,
        -17.0 / 9000.0,
        323.0 / 882_000.0,
        -5717.0 / 98_000_000.0,
    ];
    const P_HAT: [(usize, f64); 5] = [
        (1, 1.0),
        (3, 1.0 / 30.0),
        (5, -1.0 / 21_000.0),
        (7, 1.0 / 294_000.0),
        (9, 23.0 / 232_848_000.0),
    ];

    #[test]
    fn normalised_k_matches_closed_form() {
        let k = k_normalised(30);
        let t = 0.4;
        assert!((k.eval(t) - 1.5 * k_of_t(t) / t.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn rho_hat_coefficients() {
        let p = rho_hat_series(12);
        for (k, v) in P_HAT {
            assert!((p.coeff(k) - v).abs() < 1e-15, "t^{k}: {}", p.coeff(k));
        }
        for k in (0..12).step_by(2) {
            assert_eq!(p.coeff(k), 0.0);
        }
    }

    #[test]
    fn psi_coefficients_frozen() {
        let c = psi_series(2f64.powf(1.5), 5);
        // eps^(2/3) = 2 makes rho = rhohat.
        for (j, v) in PSI_HAT.iter().enumerate() {
            assert!(
                (c[j] - v).abs() < 1e-15 * v.abs().max(1.0) * 10.0,
                "j = {j}: {}",
                c[j]
            );
        }
        let c1 = psi_series(1.0, 2);
        assert!((c1[1] - 2.0 / 3.0).abs() < 1e-15);
        let c3 = psi_series(3.0, 2);
        assert!((c3[1] - 2.0 / 3.0 * 3f64.powf(-4.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn psi_series_matches_direct_quadrature() {
        for eps in [0.5, 1.0, 2.0] {
            let c = psi_series(eps, 12);
            for t in [0.05, 0.2, 0.5] {
                let p = RadialPoint::at_t(t, eps).unwrap();
                let (psi, _) = even_series(&c, p.rho);
                let direct = p.h2 / (p.rho * p.rho);
                assert!((psi - direct).abs() < 1e-12, "eps {eps}, t {t}");
            }
        }
        // Frozen 30-digit value at eps = 1, t = 0.1.
        let rho = rho_of_t(0.1, 1.0).unwrap();
        let (psi, _) = even_series(&psi_series(1.0, 12), rho);
        assert!((psi - 1.001_667_589_17).abs() < 1e-11);
    }

    #[test]
    fn even_series_derivative() {
        let c = [1.0, 0.5, -0.25];
        let (v, d) = even_series(&c, 0.3);
        assert!((v - (1.0 + 0.5 * 0.09 - 0.25 * 0.0081)).abs() < 1e-15);
        assert!((d - (2.0 * 0.5 * 0.3 - 4.0 * 0.25 * 0.027)).abs() < 1e-15);
    }
}
