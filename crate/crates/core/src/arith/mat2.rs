use std::ops::{Add, Mul};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::ratfunc::RationalFunction;
use super::rational::Rational;

/// A 2×2 matrix over Q(x), row-major `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub c: RationalFunction,
    pub d: RationalFunction,
}

impl Mat2 {
    pub fn new(a: RationalFunction, b: RationalFunction, c: RationalFunction, d: RationalFunction) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Mat2 {
        Mat2::new(
            RationalFunction::one(),
            RationalFunction::zero(),
            RationalFunction::zero(),
            RationalFunction::one(),
        )
    }

    pub fn from_constants(m: [[Rational; 2]; 2]) -> Mat2 {
        let [[a, b], [c, d]] = m;
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn rows(&self) -> [[&RationalFunction; 2]; 2] {
        [[&self.a, &self.b], [&self.c, &self.d]]
    }

    pub fn scale(&self, f: &RationalFunction) -> Mat2 {
        Mat2::new(f * &self.a, f * &self.b, f * &self.c, f * &self.d)
    }

    pub fn trace(&self) -> RationalFunction {
        &self.a + &self.d
    }

    pub fn det(&self) -> RationalFunction {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// `None` when the determinant vanishes identically.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let inv = det.recip();
        Some(Mat2::new(
            &self.d * &inv,
            &(-&self.b) * &inv,
            &(-&self.c) * &inv,
            &self.a * &inv,
        ))
    }

    /// Entry-wise derivative.
    pub fn derivative(&self) -> Mat2 {
        Mat2::new(
            self.a.derivative(),
            self.b.derivative(),
            self.c.derivative(),
            self.d.derivative(),
        )
    }

    /// Entry-wise simple-pole residue at `point`; `None` if some entry has a higher-order pole.
    pub fn residue_at(&self, point: &Rational) -> Option<[[Rational; 2]; 2]> {
        Some([
            [self.a.simple_residue(point)?, self.b.simple_residue(point)?],
            [self.c.simple_residue(point)?, self.d.simple_residue(point)?],
        ])
    }
}

/// `ad − bc`.
pub fn det2(m: &Mat2) -> RationalFunction {
    m.det()
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        )
    }
}

impl Add<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn add(self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            &self.c + &rhs.c,
            &self.d + &rhs.d,
        )
    }
}

/// Serializes as `[["num/den", ...], [...]]`-style nested arrays of display strings.
pub struct Mat2Display<'a> {
    pub matrix: &'a Mat2,
    pub var: &'a str,
}

impl Serialize for Mat2Display<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        for row in self.matrix.rows() {
            let r: Vec<String> = row.iter().map(|e| e.display_in(self.var)).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}
