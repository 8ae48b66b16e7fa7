//! Spin(4)-invariant connections and Higgs fields in radial gauge, their
//! curvature and covariant derivative, and the Calabi-Yau monopole
//! residuals.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::lie_coframe::{self, LieForm, ScalarForm};
use crate::stenzel_geometry::KahlerData;
use crate::su2::Su2;

/// `A = A_c^l + A1 th1 T1 + (A2 th2 - A3 th3 + A4 th4 - A5 th5) T2
///      + (A3 th2 + A2 th3 + A5 th4 + A4 th5) T3`, with `A_c^l = -(l/2) th6 T1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantConnection {
    pub l: i32,
    /// `A1..A5` as jets in `r` at `radius`.
    pub a: [Jet; 5],
    pub radius: f64,
}

/// `Phi = phi T1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HiggsField {
    pub phi: Jet,
    pub radius: f64,
}

fn t(i: usize, c: Jet) -> Su2<Jet> {
    Su2::along(i, c)
}

fn lie(word: &[usize], x: Su2<Jet>) -> LieForm {
    LieForm::term(word, x)
}

impl InvariantConnection {
    /// Wang ansatz: for `l != 1` only `A1` may be non-zero.
    pub fn new(l: i32, a: [Jet; 5], radius: f64) -> Result<Self> {
        if l != 1 && a[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidParameter {
                name: "A2..A5 for l != 1",
                value: f64::from(l),
            });
        }
        Ok(InvariantConnection { l, a, radius })
    }

    pub fn canonical(l: i32, radius: f64) -> Self {
        InvariantConnection {
            l,
            a: [Jet::ZERO; 5],
            radius,
        }
    }

    /// `A - A_c^l`.
    pub fn deviation(&self) -> LieForm {
        let [a1, a2, a3, a4, a5] = self.a;
        let mut f = LieForm::zero(1);
        let mut add = |i: usize, x: Su2<Jet>| f = &f + &lie(&[i], x);
        add(1, t(1, a1));
        add(2, Su2::new(Jet::ZERO, a2, a3));
        add(3, Su2::new(Jet::ZERO, -a3, a2));
        add(4, Su2::new(Jet::ZERO, a4, a5));
        add(5, Su2::new(Jet::ZERO, -a5, a4));
        f
    }

    /// The full connection form including the `theta6` term.
    pub fn form(&self) -> LieForm {
        &canonical_form(self.l) + &self.deviation()
    }

    /// `A2 A4 + A3 A5`.
    pub fn constraint(&self) -> f64 {
        let [_, a2, a3, a4, a5] = self.a;
        (a2 * a4 + a3 * a5).value
    }
}

impl HiggsField {
    pub fn new(phi: Jet, radius: f64) -> Self {
        HiggsField { phi, radius }
    }

    pub fn form(&self) -> LieForm {
        lie(&[], t(1, self.phi))
    }
}

/// `A_c^l = -(l/2) theta6 T1`.
fn canonical_form(l: i32) -> LieForm {
    lie(&[6], t(1, Jet::constant(-f64::from(l) / 2.0)))
}

pub fn canonical_connection(l: i32) -> InvariantConnection {
    InvariantConnection::canonical(l, f64::NAN)
}

/// Curvature of a Wang-ansatz connection from the closed formulas, with
/// `dr ^ d/dr (A - A_c)` taken from the jets.
pub fn closed_form_curvature(conn: &InvariantConnection) -> LieForm {
    let l = f64::from(conn.l);
    let [a1, a2, a3, a4, a5] = conn.a;
    let radial =
        ScalarForm::generator(0).wedge_lie(&conn.deviation().map(|c| c.map(Jet::derivative)));
    let mut f = radial;
    let mut add = |w: &[usize], x: Su2<Jet>| f = &f + &lie(w, x);
    if conn.l != 1 {
        add(&[2, 3], t(1, Jet::constant(-l / 2.0)));
        add(&[4, 5], t(1, Jet::constant(-l / 2.0)));
        add(&[2, 4], t(1, a1));
        add(&[3, 5], t(1, a1));
        return f;
    }
    let c23 = (a2 * a2 + a3 * a3) * 2.0 - 0.5;
    let c45 = (a4 * a4 + a5 * a5) * 2.0 - 0.5;
    let c25 = (a2 * a4 + a5 * a3) * 2.0;
    let c24 = a1 + (a2 * a5 - a4 * a3) * 2.0;
    add(&[2, 3], t(1, c23));
    add(&[4, 5], t(1, c45));
    add(&[2, 5], t(1, c25));
    add(&[3, 4], t(1, -c25));
    add(&[2, 4], t(1, c24));
    add(&[3, 5], t(1, c24));
    let p = a4 - a1 * a3 * 2.0;
    let q = a5 + a1 * a2 * 2.0;
    let u = a2 + a1 * a5 * 2.0;
    let v = a3 - a1 * a4 * 2.0;
    add(&[1, 2], Su2::new(Jet::ZERO, p, q));
    add(&[1, 3], Su2::new(Jet::ZERO, -q, p));
    add(&[1, 4], Su2::new(Jet::ZERO, -u, -v));
    add(&[1, 5], Su2::new(Jet::ZERO, v, -u));
    f
}

/// `nabla_A Phi` from the closed formula.
pub fn closed_form_covariant_derivative(conn: &InvariantConnection, higgs: &HiggsField) -> LieForm {
    let phi = higgs.phi;
    let mut f = lie(&[0], t(1, phi.derivative()));
    if conn.l != 1 {
        return f;
    }
    let [_, a2, a3, a4, a5] = conn.a;
    let two_phi = phi * 2.0;
    let mut add = |w: &[usize], x: Su2<Jet>| f = &f + &lie(w, x);
    add(&[2], Su2::new(Jet::ZERO, two_phi * a3, -(two_phi * a2)));
    add(&[3], Su2::new(Jet::ZERO, two_phi * a2, two_phi * a3));
    add(&[4], Su2::new(Jet::ZERO, two_phi * a5, -(two_phi * a4)));
    add(&[5], Su2::new(Jet::ZERO, two_phi * a4, two_phi * a5));
    f
}

/// Monopole residuals at one radius, as orthonormal-coframe maxima.
#[derive(Clone, Debug)]
pub struct MonopoleResiduals {
    /// `nabla_A Phi ^ omega^2/2 + F ^ Omega_2`, a Lie-valued 5-form.
    pub mix_form: LieForm,
    /// `F ^ omega^2`, a Lie-valued 6-form.
    pub lambda_form: LieForm,
    pub r_mix: f64,
    pub r_lambda: f64,
    pub r_constraint: f64,
}

impl MonopoleResiduals {
    pub fn max(&self) -> f64 {
        self.r_mix.max(self.r_lambda).max(self.r_constraint.abs())
    }
}

fn check_radius(fields: f64, geometry: f64) -> Result<()> {
    if fields.is_nan() || (fields - geometry).abs() <= 1e-12 * geometry.abs().max(1.0) {
        Ok(())
    } else {
        Err(Error::RadiusMismatch { fields, geometry })
    }
}

pub fn monopole_residuals(
    conn: &InvariantConnection,
    higgs: &HiggsField,
    k: &KahlerData,
) -> Result<MonopoleResiduals> {
    check_radius(conn.radius, k.radius())?;
    check_radius(higgs.radius, k.radius())?;
    let a = conn.form();
    let f = lie_coframe::curvature(&a)?;
    let nabla = lie_coframe::covariant_derivative(&a, &higgs.form())?;
    let w2 = k.omega_squared_half();
    let mix_form = &nabla.wedge(&w2) + &f.wedge(&k.omega2);
    let lambda_form = f.wedge(&w2.scale(2.0));
    Ok(MonopoleResiduals {
        r_mix: k.metric.orthonormal_max(&mix_form),
        r_lambda: k.metric.orthonormal_max(&lambda_form),
        r_constraint: conn.constraint(),
        mix_form,
        lambda_form,
    })
}

/// `(F^{2,0+0,2}, F^{1,1})` at the radius of `k`.
pub fn project_11(f: &LieForm, k: &KahlerData) -> Result<(LieForm, LieForm)> {
    k.complex.project_11(f)
}
