use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::monomial::{Monomial, DR, GENERATORS, VERTICAL};
use super::structure::SO4;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::su2::Su2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientKind {
    Scalar,
    Lie,
}

/// Coefficient ring of an [`InvariantForm`]: a radial jet or an su(2)
/// vector of radial jets.
pub trait Coefficient:
    Copy
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    const KIND: CoefficientKind;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn scale_jet(self, s: Jet) -> Self;
    fn radial_derivative(self) -> Self;
    /// Largest absolute value among the value components.
    fn max_abs(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl Coefficient for Jet {
    const KIND: CoefficientKind = CoefficientKind::Scalar;
    fn zero() -> Self {
        Jet::ZERO
    }
    fn is_zero(&self) -> bool {
        Jet::is_zero(*self)
    }
    fn scale_jet(self, s: Jet) -> Self {
        self * s
    }
    fn radial_derivative(self) -> Self {
        self.derivative()
    }
    fn max_abs(&self) -> f64 {
        self.value.abs()
    }
    fn is_finite(&self) -> bool {
        Jet::is_finite(*self)
    }
}

impl Coefficient for Su2<Jet> {
    const KIND: CoefficientKind = CoefficientKind::Lie;
    fn zero() -> Self {
        Su2::default()
    }
    fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero() && self.c3.is_zero()
    }
    fn scale_jet(self, s: Jet) -> Self {
        Su2::scale_jet(self, s)
    }
    fn radial_derivative(self) -> Self {
        self.map(Jet::derivative)
    }
    fn max_abs(&self) -> f64 {
        self.c1
            .value
            .abs()
            .max(self.c2.value.abs())
            .max(self.c3.value.abs())
    }
    fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite() && self.c3.is_finite()
    }
}

/// Homogeneous element of the exterior algebra on `{dr, theta1..theta6}`.
#[derive(Clone, PartialEq)]
pub struct InvariantForm<C> {
    degree: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type ScalarForm = InvariantForm<Jet>;
pub type LieForm = InvariantForm<Su2<Jet>>;

impl<C: Coefficient> InvariantForm<C> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= GENERATORS, "degree {degree} exceeds {GENERATORS}");
        InvariantForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `c * word`, where `word` lists generator indices in any order
    /// (0 is `dr`, 1..=6 are the `theta`s).
    pub fn term(word: &[usize], c: C) -> Self {
        let mut f = InvariantForm::zero(word.len());
        f.add_term(word, c);
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, C)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    /// Coefficient of `word`, sign-adjusted for its ordering.
    pub fn coefficient(&self, word: &[usize]) -> C {
        match Monomial::from_word(word) {
            Some((s, m)) => self.terms.get(&m).map_or(C::zero(), |c| *c * s),
            None => C::zero(),
        }
    }

    pub fn get(&self, m: Monomial) -> C {
        self.terms.get(&m).copied().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, word: &[usize], c: C) {
        assert_eq!(
            word.len(),
            self.degree,
            "term degree differs from form degree"
        );
        if let Some((s, m)) = Monomial::from_word(word) {
            self.accumulate(m, c * s);
        }
    }

    pub(crate) fn accumulate(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.degree(), self.degree);
        let entry = self.terms.entry(m).or_insert_with(C::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.accumulate(m, c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c * s)
    }

    pub fn scale_jet(&self, s: Jet) -> Self {
        self.map(|c| c.scale_jet(s))
    }

    pub fn map(&self, f: impl Fn(C) -> C) -> Self {
        let mut out = InvariantForm::zero(self.degree);
        for (m, c) in self.terms() {
            out.accumulate(m, f(c));
        }
        out
    }

    /// `self ^ rhs` for a scalar right factor.
    pub fn wedge(&self, rhs: &ScalarForm) -> Self {
        wedge_with(self, rhs, |a, b| a.scale_jet(b))
    }

    /// Maurer-Cartan exterior derivative with exact radial part from jets.
    /// Forms of top degree map to the zero 7-form.
    pub fn d(&self) -> Self {
        let mut out = InvariantForm::zero((self.degree + 1).min(GENERATORS));
        if self.degree == GENERATORS {
            return out;
        }
        for (m, c) in self.terms() {
            if !m.contains(DR) {
                if let Some((s, dm)) = Monomial::generator(DR).wedge(m) {
                    out.accumulate(dm, c.radial_derivative() * s);
                }
            }
            let word: alloc::vec::Vec<usize> = m.indices().collect();
            for (p, &g) in word.iter().enumerate() {
                if g == DR {
                    continue;
                }
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                for (k, i, j) in SO4.maurer_cartan(g) {
                    let mut w = alloc::vec::Vec::with_capacity(word.len() + 1);
                    w.extend_from_slice(&word[..p]);
                    w.push(i);
                    w.push(j);
                    w.extend_from_slice(&word[p + 1..]);
                    if let Some((s, dm)) = Monomial::from_word(&w) {
                        out.accumulate(dm, c * (sign * k * s));
                    }
                }
            }
        }
        out
    }

    pub fn has_vertical(&self) -> bool {
        self.terms.keys().any(|m| m.contains(VERTICAL))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.terms.values().all(Coefficient::is_finite)
    }

    pub fn kind(&self) -> CoefficientKind {
        C::KIND
    }
}

impl ScalarForm {
    /// A single generator: `dr` for 0, `theta^i` for 1..=6.
    pub fn generator(i: usize) -> Self {
        InvariantForm::term(&[i], Jet::ONE)
    }

    pub fn basis(word: &[usize]) -> Self {
        InvariantForm::term(word, Jet::ONE)
    }

    pub fn constant(c: f64) -> Self {
        InvariantForm::term(&[], Jet::constant(c))
    }

    /// `self ^ rhs` with an su(2)-valued right factor.
    pub fn wedge_lie(&self, rhs: &LieForm) -> LieForm {
        wedge_with(self, rhs, |a, b| b.scale_jet(a))
    }

    /// Tensor with a fixed Lie algebra element.
    pub fn tensor(&self, x: Su2<Jet>) -> LieForm {
        let mut out = LieForm::zero(self.degree);
        for (m, c) in self.terms() {
            out.accumulate(m, x.scale_jet(c));
        }
        out
    }

    pub fn value(&self) -> f64 {
        assert_eq!(self.degree, 0);
        self.get(Monomial::ONE).value
    }
}

impl LieForm {
    /// Graded bracket `[a ^ b]` with `[alpha X ^ beta Y] = alpha ^ beta [X, Y]`.
    pub fn bracket_wedge(&self, rhs: &LieForm) -> LieForm {
        wedge_with(self, rhs, |a, b| a.bracket(b))
    }

    /// Component along `T_i`.
    pub fn component(&self, i: usize) -> ScalarForm {
        let mut out = ScalarForm::zero(self.degree);
        for (m, c) in self.terms() {
            let v = match i {
                1 => c.c1,
                2 => c.c2,
                3 => c.c3,
                _ => panic!("su(2) component {i} out of range 1..=3"),
            };
            out.accumulate(m, v);
        }
        out
    }
}

fn wedge_with<A, B, O>(
    a: &InvariantForm<A>,
    b: &InvariantForm<B>,
    f: impl Fn(A, B) -> O,
) -> InvariantForm<O>
where
    A: Coefficient,
    B: Coefficient,
    O: Coefficient,
{
    let degree = a.degree + b.degree;
    let mut out = InvariantForm {
        degree: degree.min(GENERATORS),
        terms: BTreeMap::new(),
    };
    if degree > GENERATORS {
        return out;
    }
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if let Some((s, m)) = ma.wedge(mb) {
                out.accumulate(m, f(ca, cb) * s);
            }
        }
    }
    out
}

impl<C: Coefficient> Add for &InvariantForm<C> {
    type Output = InvariantForm<C>;
    fn add(self, o: Self) -> InvariantForm<C> {
        self.try_add(o).expect("adding forms of different degree")
    }
}

impl<C: Coefficient> Add for InvariantForm<C> {
    type Output = InvariantForm<C>;
    fn add(self, o: Self) -> InvariantForm<C> {
        &self + &o
    }
}

impl<C: Coefficient> Sub for &InvariantForm<C> {
    type Output = InvariantForm<C>;
    fn sub(self, o: Self) -> InvariantForm<C> {
        self.try_add(&o.scale(-1.0))
            .expect("subtracting forms of different degree")
    }
}

impl<C: Coefficient> Sub for InvariantForm<C> {
    type Output = InvariantForm<C>;
    fn sub(self, o: Self) -> InvariantForm<C> {
        &self - &o
    }
}

impl<C: Coefficient> Neg for InvariantForm<C> {
    type Output = InvariantForm<C>;
    fn neg(self) -> InvariantForm<C> {
        self.scale(-1.0)
    }
}

impl<C: Coefficient> Mul<f64> for InvariantForm<C> {
    type Output = InvariantForm<C>;
    fn mul(self, s: f64) -> InvariantForm<C> {
        self.scale(s)
    }
}

impl<C: Coefficient> fmt::Display for InvariantForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match C::KIND {
                CoefficientKind::Scalar => write!(f, "{c} * {m}")?,
                CoefficientKind::Lie => write!(f, "{c} * {m} ⊗ T")?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for InvariantForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}-form] {}", self.degree, self)
    }
}

/// A form whose coefficient type is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyForm {
    Scalar(ScalarForm),
    Lie(LieForm),
}

impl AnyForm {
    pub fn kind(&self) -> CoefficientKind {
        match self {
            AnyForm::Scalar(_) => CoefficientKind::Scalar,
            AnyForm::Lie(_) => CoefficientKind::Lie,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            AnyForm::Scalar(f) => f.degree(),
            AnyForm::Lie(f) => f.degree(),
        }
    }

    /// Plain wedge. Two Lie-valued factors must go through
    /// [`AnyForm::bracket_wedge`] instead.
    pub fn wedge(&self, rhs: &AnyForm) -> Result<AnyForm> {
        match (self, rhs) {
            (AnyForm::Scalar(a), AnyForm::Scalar(b)) => Ok(AnyForm::Scalar(a.wedge(b))),
            (AnyForm::Scalar(a), AnyForm::Lie(b)) => Ok(AnyForm::Lie(a.wedge_lie(b))),
            (AnyForm::Lie(a), AnyForm::Scalar(b)) => Ok(AnyForm::Lie(a.wedge(b))),
            (AnyForm::Lie(_), AnyForm::Lie(_)) => Err(Error::IncompatibleCoefficients {
                op: "wedge",
                left: CoefficientKind::Lie,
                right: CoefficientKind::Lie,
            }),
        }
    }

    pub fn bracket_wedge(&self, rhs: &AnyForm) -> Result<AnyForm> {
        match (self, rhs) {
            (AnyForm::Lie(a), AnyForm::Lie(b)) => Ok(AnyForm::Lie(a.bracket_wedge(b))),
            _ => Err(Error::IncompatibleCoefficients {
                op: "bracket-wedge",
                left: self.kind(),
                right: rhs.kind(),
            }),
        }
    }

    pub fn d(&self) -> AnyForm {
        match self {
            AnyForm::Scalar(f) => AnyForm::Scalar(f.d()),
            AnyForm::Lie(f) => AnyForm::Lie(f.d()),
        }
    }

    pub fn into_lie(self, op: &'static str) -> Result<LieForm> {
        match self {
            AnyForm::Lie(f) => Ok(f),
            AnyForm::Scalar(_) => Err(Error::NotLieValued { op }),
        }
    }
}

impl From<ScalarForm> for AnyForm {
    fn from(f: ScalarForm) -> Self {
        AnyForm::Scalar(f)
    }
}

impl From<LieForm> for AnyForm {
    fn from(f: LieForm) -> Self {
        AnyForm::Lie(f)
    }
}
