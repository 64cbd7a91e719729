use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Sub};

use serde::{Deserialize, Serialize};

use super::{DiffOp, Rational};

/// Finite sum `Σ_e ħ^e D_e` of differential operators graded by the power
/// of ħ. Grades may be any integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGradedOp {
    dim: usize,
    grades: BTreeMap<i32, DiffOp>,
}

impl HGradedOp {
    pub fn zero(dim: usize) -> Self {
        HGradedOp {
            dim,
            grades: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::single(0, DiffOp::identity(dim))
    }

    /// `ħ^e D`.
    pub fn single(e: i32, d: DiffOp) -> Self {
        let mut g = Self::zero(d.dim());
        g.add_grade(e, d);
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grades(&self) -> impl Iterator<Item = (i32, &DiffOp)> {
        self.grades.iter().map(|(e, d)| (*e, d))
    }

    pub fn grade(&self, e: i32) -> Option<&DiffOp> {
        self.grades.get(&e)
    }

    pub fn support(&self) -> Vec<i32> {
        self.grades.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn add_grade(&mut self, e: i32, d: DiffOp) {
        assert_eq!(d.dim(), self.dim, "operator dimension mismatch");
        if d.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.grades.entry(e) {
            Entry::Vacant(v) => {
                v.insert(d);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &d;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiplies by `ħ^k`.
    pub fn shift(&self, k: i32) -> HGradedOp {
        HGradedOp {
            dim: self.dim,
            grades: self
                .grades
                .iter()
                .map(|(e, d)| (e + k, d.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> HGradedOp {
        let mut out = HGradedOp::zero(self.dim);
        for (e, d) in &self.grades {
            out.add_grade(*e, d.scale(c));
        }
        out
    }

    pub fn compose(&self, other: &HGradedOp) -> HGradedOp {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let mut out = HGradedOp::zero(self.dim);
        for (e1, d1) in &self.grades {
            for (e2, d2) in &other.grades {
                out.add_grade(e1 + e2, d1.compose(d2));
            }
        }
        out
    }

    pub fn commutator(&self, other: &HGradedOp) -> HGradedOp {
        &self.compose(other) - &other.compose(self)
    }

    pub fn pow(&self, k: u32) -> HGradedOp {
        (0..k).fold(HGradedOp::identity(self.dim), |acc, _| acc.compose(self))
    }
}

impl Add for &HGradedOp {
    type Output = HGradedOp;
    fn add(self, rhs: &HGradedOp) -> HGradedOp {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&HGradedOp> for HGradedOp {
    fn add_assign(&mut self, rhs: &HGradedOp) {
        for (e, d) in &rhs.grades {
            self.add_grade(*e, d.clone());
        }
    }
}

impl Sub for &HGradedOp {
    type Output = HGradedOp;
    fn sub(self, rhs: &HGradedOp) -> HGradedOp {
        let mut out = self.clone();
        for (e, d) in &rhs.grades {
            out.add_grade(*e, -d);
        }
        out
    }
}
