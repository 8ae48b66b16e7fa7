//! The Calabi-Yau structure `(omega, Omega_1 + i Omega_2)`, the metric and
//! the complex structure as invariant forms at one radius.

#[allow(unused_imports)]
use num_traits::Float;

use super::{GeometryParams, RadialJets, RadialPoint};
use crate::error::Result;
use crate::jet::Jet;
use crate::lie_coframe::{CoframeMetric, ComplexStructure, Monomial, Orientation, ScalarForm};

#[derive(Clone, Debug)]
pub struct KahlerData {
    pub point: RadialPoint,
    pub jets: RadialJets,
    pub omega: ScalarForm,
    pub omega1: ScalarForm,
    pub omega2: ScalarForm,
    pub metric: CoframeMetric,
    pub complex: ComplexStructure,
}

fn form(terms: &[(&[usize], Jet)]) -> ScalarForm {
    let degree = terms[0].0.len();
    let mut out = ScalarForm::zero(degree);
    for (w, c) in terms {
        out.add_term(w, *c);
    }
    out
}

pub fn assemble_kahler_data(r: f64, params: GeometryParams) -> Result<KahlerData> {
    let point = RadialPoint::at_r(r, params)?;
    let j = RadialJets::from_point(&point);
    let half_r = j.r * 0.5;
    let (rp, rm) = (j.rplus, j.rminus);

    let omega = form(&[(&[0, 1], j.gdot), (&[2, 4], j.g), (&[3, 5], j.g)]);
    let omega1 = form(&[
        (&[1, 2, 3], -(rp * rp)),
        (&[1, 4, 5], rm * rm),
        (&[0, 2, 5], -half_r),
        (&[0, 3, 4], half_r),
    ]);
    let omega2 = form(&[
        (&[0, 2, 3], half_r * rp / rm),
        (&[0, 4, 5], -(half_r * rm / rp)),
        (&[1, 3, 4], j.rprm),
        (&[1, 2, 5], -j.rprm),
    ]);

    let s_r = j.r / (j.g * 2.0);
    let s1 = j.rprm / j.g;
    let s23 = (j.g * rp / rm).sqrt();
    let s45 = (j.g * rm / rp).sqrt();
    let metric = CoframeMetric::new(r, [s_r, s1, s23, s23, s45, s45], Orientation::Complex)?;

    let mut m = [[Jet::ZERO; 6]; 6];
    m[0][1] = -(j.rprm * 2.0 / j.r);
    m[1][0] = j.r / (j.rprm * 2.0);
    m[2][4] = -(rm / rp);
    m[4][2] = rp / rm;
    m[3][5] = -(rm / rp);
    m[5][3] = rp / rm;
    let complex = ComplexStructure::new(r, m);

    Ok(KahlerData {
        point,
        jets: j,
        omega,
        omega1,
        omega2,
        metric,
        complex,
    })
}

impl KahlerData {
    pub fn radius(&self) -> f64 {
        self.point.r
    }

    /// `omega^3 / 3!`.
    pub fn omega_cubed(&self) -> ScalarForm {
        self.omega
            .wedge(&self.omega)
            .wedge(&self.omega)
            .scale(1.0 / 6.0)
    }

    pub fn omega_squared_half(&self) -> ScalarForm {
        self.omega.wedge(&self.omega).scale(0.5)
    }

    /// `(i/8) Omega ^ conj(Omega) = (1/4) Omega_1 ^ Omega_2`.
    pub fn i8_omega_omegabar(&self) -> ScalarForm {
        self.omega1.wedge(&self.omega2).scale(0.25)
    }

    /// `|omega^3/3! + s (i/8) Omega ^ conj(Omega)| / |omega^3/3!|` for the
    /// sign `s`; the identity `omega^3/3! = -s (i/8) Omega ^ conj(Omega)`
    /// holds iff this vanishes.
    pub fn volume_identity_residual(&self, s: f64) -> f64 {
        let top = Monomial::from_bits(0x3f);
        let w = self.omega_cubed().get(top).value;
        let o = self.i8_omega_omegabar().get(top).value;
        (w + s * o).abs() / w.abs()
    }

    /// `omega(X, Y) - g(I X, Y)` for coframe-component vectors `X`, `Y`.
    pub fn compatibility_defect(&self, x: [f64; 6], y: [f64; 6]) -> f64 {
        let w = self.omega_matrix();
        let m = self.complex.matrix();
        let s = self.metric.scales();
        let mut omega_xy = 0.0;
        let mut g_ixy = 0.0;
        for a in 0..6 {
            let ix: f64 = (0..6).map(|b| m[a][b] * x[b]).sum();
            g_ixy += s[a].value * s[a].value * ix * y[a];
            for b in 0..6 {
                omega_xy += w[a][b] * x[a] * y[b];
            }
        }
        (omega_xy - g_ixy).abs()
    }

    /// Antisymmetric matrix of `omega` in the basis `dr, theta1..theta5`.
    pub fn omega_matrix(&self) -> [[f64; 6]; 6] {
        let mut w = [[0.0; 6]; 6];
        for (mono, c) in self.omega.terms() {
            let mut it = mono.indices();
            let (a, b) = (it.next().expect("2-form"), it.next().expect("2-form"));
            w[a][b] = c.value;
            w[b][a] = -c.value;
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_coframe::{InvariantForm, VERTICAL};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn radii() -> [(f64, f64); 7] {
        [
            (0.5, 0.51),
            (0.5, 2.0),
            (1.0, 1.0 + 1e-4),
            (1.0, 1.7),
            (1.0, 30.0),
            (2.0, 2.3),
            (0.0, 1.4),
        ]
    }

    #[test]
    fn closed_forms() {
        for (eps, r) in radii() {
            let k = assemble_kahler_data(r, GeometryParams::new(eps).unwrap()).unwrap();
            let scale = k.omega.max_abs();
            assert!(k.omega.d().max_abs() < 1e-10 * scale, "d omega at r = {r}");
            let s1 = k.omega1.max_abs();
            assert!(k.omega1.d().max_abs() < 1e-10 * s1, "d Omega1 at r = {r}");
            assert!(
                k.omega2.d().max_abs() < 1e-10 * k.omega2.max_abs(),
                "d Omega2 at r = {r}"
            );
            assert!(!k.omega.has_vertical());
        }
    }

    #[test]
    fn volume_identity_sign() {
        for (eps, r) in radii() {
            let k = assemble_kahler_data(r, GeometryParams::new(eps).unwrap()).unwrap();
            let top = Monomial::from_bits(0x3f);
            let j = k.jets;
            let expected = -(j.r * j.rprm).value * 0.5;
            assert!(
                (k.i8_omega_omegabar().get(top).value - expected).abs() < 1e-12 * expected.abs()
            );
            assert!((k.omega_cubed().get(top).value - expected).abs() < 1e-12 * expected.abs());
            // omega^3/3! = +(i/8) Omega ^ conj(Omega) on this coframe.
            assert!(k.volume_identity_residual(-1.0) < 1e-12);
            assert!((k.volume_identity_residual(1.0) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn omega_from_holomorphic_coordinates() {
        // dz2 dz3 dz4 / z1 on the quadric, split into real and imaginary
        // parts: dz2 = -R+ th1 + i r/(2R-) dr, dz3 = -R+ th2 - i R- th4,
        // dz4 = -R+ th3 - i R- th5, z1 = R+.
        let params = GeometryParams::new(1.0).unwrap();
        let mut ratio: Option<f64> = None;
        for r in [1.2, 2.0, 5.0] {
            let k = assemble_kahler_data(r, params).unwrap();
            let j = k.jets;
            let (rp, rm) = (j.rplus, j.rminus);
            let th = |i: usize, c: Jet| ScalarForm::term(&[i], c);
            let a2 = th(1, -rp);
            let b2 = th(0, j.r / (rm * 2.0));
            let a3 = th(2, -rp);
            let b3 = th(4, -rm);
            let a4 = th(3, -rp);
            let b4 = th(5, -rm);
            let re: ScalarForm = &(&(&a2.wedge(&a3).wedge(&a4) - &a2.wedge(&b3).wedge(&b4))
                - &b2.wedge(&a3).wedge(&b4))
                - &b2.wedge(&b3).wedge(&a4);
            let im: ScalarForm = &(&(&b2.wedge(&a3).wedge(&a4) + &a2.wedge(&b3).wedge(&a4))
                + &a2.wedge(&a3).wedge(&b4))
                - &b2.wedge(&b3).wedge(&b4);
            let re = re.scale_jet(rp.recip());
            let im = im.scale_jet(rp.recip());
            let q = k
                .omega1
                .get(Monomial::from_word(&[1, 2, 3]).unwrap().1)
                .value
                / re.get(Monomial::from_word(&[1, 2, 3]).unwrap().1).value;
            let diff1 = &k.omega1 - &re.scale(q);
            let diff2 = &k.omega2 - &im.scale(q);
            assert!(diff1.max_abs() < 1e-12 * k.omega1.max_abs(), "{diff1}");
            assert!(diff2.max_abs() < 1e-12 * k.omega2.max_abs(), "{diff2}");
            if let Some(p) = ratio {
                assert!((q - p).abs() < 1e-14);
            }
            ratio = Some(q);
        }
    }

    #[test]
    fn omega_is_type_11_and_omega_is_type_30() {
        let k = assemble_kahler_data(1.9, GeometryParams::new(1.0).unwrap()).unwrap();
        let (f20, _) = k.complex.project_11(&k.omega).unwrap();
        assert!(f20.max_abs() < 1e-14);
        let sq = k
            .complex
            .apply(&k.complex.apply(&ScalarForm::generator(2)).unwrap())
            .unwrap();
        assert!((&sq + &ScalarForm::generator(2)).max_abs() < 1e-14);
    }

    #[test]
    fn omega_compatible_with_metric() {
        let mut rng = StdRng::seed_from_u64(11);
        for (eps, r) in radii() {
            let k = assemble_kahler_data(r, GeometryParams::new(eps).unwrap()).unwrap();
            for _ in 0..20 {
                let x: [f64; 6] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let y: [f64; 6] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let scale = k.omega.max_abs().max(1.0);
                assert!(k.compatibility_defect(x, y) < 1e-10 * scale, "r = {r}");
            }
        }
    }

    #[test]
    fn lambda_of_omega() {
        for (eps, r) in radii() {
            let k = assemble_kahler_data(r, GeometryParams::new(eps).unwrap()).unwrap();
            let l = k.metric.lambda(&k.omega, &k.omega).unwrap();
            assert!((l.value() - 3.0).abs() < 1e-12);
            let vol = k.metric.volume();
            let w3 = k.omega_cubed();
            assert!((&vol - &w3).max_abs() < 1e-12 * vol.max_abs());
        }
    }

    #[test]
    fn i_on_theta1_where_two_rprm_equals_r() {
        // 2 R+ R- = r  <=>  r^4 - eps^4 = r^2.
        let eps = 1.0f64;
        let r = ((1.0 + (1.0 + 4.0 * eps.powi(4)).sqrt()) / 2.0).sqrt();
        let k = assemble_kahler_data(r, GeometryParams::new(eps).unwrap()).unwrap();
        let i1 = k.complex.apply(&ScalarForm::generator(1)).unwrap();
        assert!((&i1 - &ScalarForm::generator(0)).max_abs() < 1e-12);
    }

    #[test]
    fn cone_metric_coefficients() {
        for r in [0.3, 1.0, 7.0] {
            let k = assemble_kahler_data(r, GeometryParams::cone()).unwrap();
            let rho = k.point.rho;
            let s = k.metric.scales();
            // dr scale is d rho / dr.
            let drho_dr = (2.0f64 / 3.0) * 1.5f64.powf(2.0 / 3.0) * r.powf(-1.0 / 3.0);
            assert!((s[0].value - drho_dr).abs() < 1e-13);
            assert!((s[1].value - 2.0 * rho / 3.0).abs() < 1e-13 * rho);
            for si in &s[2..6] {
                assert!((si.value - rho / 3f64.sqrt()).abs() < 1e-13 * rho);
            }
        }
    }

    #[test]
    fn hodge_star_is_an_isometry() {
        let k = assemble_kahler_data(2.2, GeometryParams::new(1.0).unwrap()).unwrap();
        for bits in 0u8..64 {
            let m = Monomial::from_bits(bits);
            if m.contains(VERTICAL) {
                continue;
            }
            let mut a: InvariantForm<Jet> = ScalarForm::zero(m.degree());
            a.add_term(&m.indices().collect::<alloc::vec::Vec<_>>(), Jet::ONE);
            let star = k.metric.hodge_star(&a).unwrap();
            let n0 = k.metric.orthonormal_max(&a);
            let n1 = k.metric.orthonormal_max(&star);
            assert!((n0 - n1).abs() < 1e-12 * n0);
            let back = k.metric.hodge_star(&star).unwrap();
            let sign: f64 = if (m.degree() * (6 - m.degree())) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            assert!((&back - &a.scale(sign)).max_abs() < 1e-12);
        }
    }
}
