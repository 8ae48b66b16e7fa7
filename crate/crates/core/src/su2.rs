//! The Lie algebra su(2) in the basis `T1, T2, T3` with `[Ti, Tj] = 2 e_ijk Tk`.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

use crate::jet::Jet;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Su2<T = f64> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

pub type Su2Vector = Su2<f64>;
pub type Su2Jet = Su2<Jet>;

impl<T> Su2<T> {
    pub const fn new(c1: T, c2: T, c3: T) -> Self {
        Su2 { c1, c2, c3 }
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> Su2<U> {
        Su2::new(f(self.c1), f(self.c2), f(self.c3))
    }

    pub fn components(&self) -> [&T; 3] {
        [&self.c1, &self.c2, &self.c3]
    }
}

impl<T: Copy + Default + From<f64>> Su2<T> {
    /// Basis element `T_i`, `i` in `1..=3`.
    pub fn basis(i: usize) -> Self {
        let one = T::from(1.0);
        let zero = T::default();
        match i {
            1 => Su2::new(one, zero, zero),
            2 => Su2::new(zero, one, zero),
            3 => Su2::new(zero, zero, one),
            _ => panic!("su(2) basis index {i} out of range 1..=3"),
        }
    }

    pub fn along(i: usize, c: T) -> Self {
        let zero = T::default();
        match i {
            1 => Su2::new(c, zero, zero),
            2 => Su2::new(zero, c, zero),
            3 => Su2::new(zero, zero, c),
            _ => panic!("su(2) basis index {i} out of range 1..=3"),
        }
    }
}

impl<T> Su2<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Mul<f64, Output = T>,
{
    /// Lie bracket `[a, b] = 2 a x b`.
    pub fn bracket(self, o: Self) -> Self {
        Su2::new(
            (self.c2 * o.c3 - self.c3 * o.c2) * 2.0,
            (self.c3 * o.c1 - self.c1 * o.c3) * 2.0,
            (self.c1 * o.c2 - self.c2 * o.c1) * 2.0,
        )
    }

    /// Ad-invariant inner product normalised so that `|T_i| = 1`.
    pub fn dot(self, o: Self) -> T {
        self.c1 * o.c1 + self.c2 * o.c2 + self.c3 * o.c3
    }
}

impl Su2<f64> {
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Adjoint action of SU(2): rotates the coefficient vector by `angle`
    /// about `axis`.
    pub fn rotate(self, axis: Su2<f64>, angle: f64) -> Self {
        let n = axis.norm();
        let k = Su2::new(axis.c1 / n, axis.c2 / n, axis.c3 / n);
        let (s, c) = angle.sin_cos();
        let cross = Su2::new(
            k.c2 * self.c3 - k.c3 * self.c2,
            k.c3 * self.c1 - k.c1 * self.c3,
            k.c1 * self.c2 - k.c2 * self.c1,
        );
        let kd = k.dot(self);
        Su2::new(
            self.c1 * c + cross.c1 * s + k.c1 * kd * (1.0 - c),
            self.c2 * c + cross.c2 * s + k.c2 * kd * (1.0 - c),
            self.c3 * c + cross.c3 * s + k.c3 * kd * (1.0 - c),
        )
    }
}

impl Su2<Jet> {
    pub fn value(self) -> Su2<f64> {
        self.map(|j| j.value)
    }

    pub fn scale_jet(self, s: Jet) -> Self {
        self.map(|j| j * s)
    }
}

impl<T: Add<Output = T>> Add for Su2<T> {
    type Output = Su2<T>;
    fn add(self, o: Self) -> Self {
        Su2::new(self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)
    }
}

impl<T: Sub<Output = T>> Sub for Su2<T> {
    type Output = Su2<T>;
    fn sub(self, o: Self) -> Self {
        Su2::new(self.c1 - o.c1, self.c2 - o.c2, self.c3 - o.c3)
    }
}

impl<T: Neg<Output = T>> Neg for Su2<T> {
    type Output = Su2<T>;
    fn neg(self) -> Self {
        Su2::new(-self.c1, -self.c2, -self.c3)
    }
}

impl<T: Mul<f64, Output = T>> Mul<f64> for Su2<T> {
    type Output = Su2<T>;
    fn mul(self, s: f64) -> Self {
        Su2::new(self.c1 * s, self.c2 * s, self.c3 * s)
    }
}

impl<T: Copy + Add<Output = T>> AddAssign for Su2<T> {
    fn add_assign(&mut self, o: Self) {
        *self = Su2::new(self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3);
    }
}

impl<T: fmt::Display> fmt::Display for Su2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c1, self.c2, self.c3)
    }
}
