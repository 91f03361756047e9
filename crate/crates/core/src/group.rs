use std::fmt;

use crate::error::Result;

/// Common interface of the group element representations evaluated by the
/// `equations` layer: flat wreath elements and nested iterated-wreath
/// elements. Elements know which group they belong to; the identity needs
/// the group description.
pub trait GroupElement: Clone + Eq + Ord + fmt::Debug + fmt::Display + Sized {
    type Spec: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn identity(spec: &Self::Spec) -> Self;

    fn belongs_to(&self, spec: &Self::Spec) -> bool;

    /// Group product; fails when the operands live in different groups.
    fn try_mul(&self, rhs: &Self) -> Result<Self>;

    fn inverse(&self) -> Self;

    fn is_identity(&self) -> bool;

    /// Parses a brace-delimited element literal. `line`/`column` locate the
    /// literal inside its file for error reporting.
    fn parse_literal(text: &str, line: usize, column: usize, spec: &Self::Spec) -> Result<Self>;

    fn try_pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.try_mul(&sq)?,
                });
            }
            e >>= 1;
            if e > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(match acc {
            Some(a) => a,
            None => self.try_mul(&self.inverse())?,
        })
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`.
    fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.inverse()
            .try_mul(&rhs.inverse())?
            .try_mul(self)?
            .try_mul(rhs)
    }

    /// Left-normed `[g1, g2, ..., gr] = [[g1, ..., g(r-1)], gr]`.
    fn commutator_chain(&self, rest: &[Self]) -> Result<Self> {
        rest.iter().try_fold(self.clone(), |acc, g| acc.commutator(g))
    }
}
