use super::form::{Coefficient, InvariantForm, ScalarForm};
use super::monomial::{Monomial, VERTICAL};
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Which top form counts as positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    /// The complex orientation `omega^3 / 3! > 0`. On the Stenzel coframe
    /// this is `-dr ^ theta12345`.
    #[default]
    Complex,
    /// `dr ^ theta12345 > 0`.
    Coframe,
}

/// Diagonal metric on `{dr, theta1..theta5}` given by the lengths of the
/// coframe: `e^0 = s_0 dr`, `e^i = s_i theta^i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoframeMetric {
    radius: f64,
    scales: [Jet; 6],
    orientation: Orientation,
}

impl CoframeMetric {
    pub fn new(radius: f64, scales: [Jet; 6], orientation: Orientation) -> Result<Self> {
        for s in &scales {
            if !(s.value > 0.0 && s.value.is_finite()) {
                return Err(Error::Domain {
                    what: "coframe metric",
                    value: radius,
                });
            }
        }
        Ok(CoframeMetric {
            radius,
            scales,
            orientation,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn scales(&self) -> [Jet; 6] {
        self.scales
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Length of a horizontal monomial, the product of its scale factors.
    pub fn monomial_norm(&self, m: Monomial) -> Jet {
        m.indices().fold(Jet::ONE, |acc, i| acc * self.scales[i])
    }

    /// Positive unit volume form in coframe coordinates.
    pub fn volume(&self) -> ScalarForm {
        let top = Monomial::from_bits(0x3f);
        let sign = match self.orientation {
            Orientation::Complex => -1.0,
            Orientation::Coframe => 1.0,
        };
        let mut v = ScalarForm::zero(6);
        v.accumulate(top, self.monomial_norm(top) * sign);
        v
    }

    pub fn hodge_star<C: Coefficient>(&self, a: &InvariantForm<C>) -> Result<InvariantForm<C>> {
        if a.has_vertical() {
            return Err(Error::VerticalComponent);
        }
        let o = match self.orientation {
            Orientation::Complex => -1.0,
            Orientation::Coframe => 1.0,
        };
        let mut out = InvariantForm::zero(6 - a.degree().min(6));
        for (m, c) in a.terms() {
            let comp = m.horizontal_complement();
            let (s, _) = m.wedge(comp).expect("complement is disjoint");
            let factor = self.monomial_norm(comp) / self.monomial_norm(m);
            out.accumulate(comp, c.scale_jet(factor) * (s * o));
        }
        Ok(out)
    }

    /// Coefficients in the orthonormal coframe `e^I`, values only.
    pub fn orthonormal<C: Coefficient>(&self, a: &InvariantForm<C>) -> InvariantForm<C> {
        let mut out = InvariantForm::zero(a.degree());
        for (m, c) in a.terms() {
            if m.contains(VERTICAL) {
                out.accumulate(m, c);
            } else {
                out.accumulate(m, c.scale_jet(self.monomial_norm(m).recip()));
            }
        }
        out
    }

    /// Largest orthonormal coefficient magnitude.
    pub fn orthonormal_max<C: Coefficient>(&self, a: &InvariantForm<C>) -> f64 {
        self.orthonormal(a).max_abs()
    }

    /// `Lambda beta = *(beta ^ omega^2 / 2)` for a 2-form `beta`.
    pub fn lambda<C: Coefficient>(
        &self,
        beta: &InvariantForm<C>,
        omega: &ScalarForm,
    ) -> Result<InvariantForm<C>> {
        if beta.degree() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: beta.degree(),
            });
        }
        if omega.degree() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: omega.degree(),
            });
        }
        let omega2 = omega.wedge(omega).scale(0.5);
        self.hodge_star(&beta.wedge(&omega2))
    }
}
