use super::form::{Coefficient, InvariantForm};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Almost complex structure acting on horizontal 1-forms:
/// `I(e_a) = sum_b m[a][b] e_b` for the basis `dr, theta1..theta5`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexStructure {
    radius: f64,
    m: [[Jet; 6]; 6],
}

impl ComplexStructure {
    pub fn new(radius: f64, m: [[Jet; 6]; 6]) -> Self {
        ComplexStructure { radius, m }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn matrix(&self) -> [[f64; 6]; 6] {
        core::array::from_fn(|a| core::array::from_fn(|b| self.m[a][b].value))
    }

    /// Pull back a horizontal form of degree 1 or 2 by `I`.
    pub fn apply<C: Coefficient>(&self, a: &InvariantForm<C>) -> Result<InvariantForm<C>> {
        if a.has_vertical() {
            return Err(Error::VerticalComponent);
        }
        let mut out = InvariantForm::zero(a.degree());
        match a.degree() {
            0 => return Ok(a.clone()),
            1 => {
                for (mono, c) in a.terms() {
                    let i = mono.indices().next().expect("degree one");
                    for j in 0..6 {
                        if !self.m[i][j].is_zero() {
                            out.accumulate(Monomial::generator(j), c.scale_jet(self.m[i][j]));
                        }
                    }
                }
            }
            2 => {
                for (mono, c) in a.terms() {
                    let mut it = mono.indices();
                    let (i, k) = (
                        it.next().expect("degree two"),
                        it.next().expect("degree two"),
                    );
                    for j in 0..6 {
                        if self.m[i][j].is_zero() {
                            continue;
                        }
                        for l in 0..6 {
                            if self.m[k][l].is_zero() {
                                continue;
                            }
                            if let Some((s, m)) = Monomial::from_word(&[j, l]) {
                                out.accumulate(m, c.scale_jet(self.m[i][j] * self.m[k][l]) * s);
                            }
                        }
                    }
                }
            }
            d => {
                return Err(Error::DegreeMismatch {
                    expected: 2,
                    found: d,
                })
            }
        }
        Ok(out)
    }

    /// Split a 2-form into its `(2,0)+(0,2)` and `(1,1)` parts.
    pub fn project_11<C: Coefficient>(
        &self,
        f: &InvariantForm<C>,
    ) -> Result<(InvariantForm<C>, InvariantForm<C>)> {
        if f.degree() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: f.degree(),
            });
        }
        let jf = self.apply(f)?;
        let f11 = (f + &jf).scale(0.5);
        let f20 = (f - &jf).scale(0.5);
        Ok((f20, f11))
    }
}
