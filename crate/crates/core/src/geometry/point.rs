//! Points of the projective plane in canonical form.

use crate::arith::{PrimeField, Scalar};
use crate::error::{Error, Result};
use std::fmt;

/// A point of P^2(F_p), stored with its last nonzero coordinate scaled to 1.
///
/// The canonical representative is unique per projective point, so derived
/// equality and ordering are the projective ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: [Scalar; 3],
}

impl ProjPoint {
    /// Canonicalizes an arbitrary nonzero coordinate triple.
    pub fn new(coords: [Scalar; 3]) -> Result<Self> {
        let field = coords[0].field();
        if coords.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let last_nonzero = coords.iter().rposition(|c| !c.is_zero()).ok_or_else(|| {
            Error::InvalidInput("all three projective coordinates are zero".into())
        })?;
        let inv = coords[last_nonzero].invert()?;
        Ok(ProjPoint {
            coords: [coords[0] * inv, coords[1] * inv, coords[2] * inv],
        })
    }

    pub fn from_values(field: PrimeField, values: [i64; 3]) -> Result<Self> {
        Self::new([
            field.scalar(values[0]),
            field.scalar(values[1]),
            field.scalar(values[2]),
        ])
    }

    pub fn coords(&self) -> [Scalar; 3] {
        self.coords
    }

    pub fn field(&self) -> PrimeField {
        self.coords[0].field()
    }

    /// Index of the coordinate normalized to 1; the canonical affine chart
    /// containing this point.
    pub fn chart(&self) -> usize {
        self.coords
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("canonical point has a nonzero coordinate")
    }

    pub fn coord_values(&self) -> [u64; 3] {
        [
            self.coords[0].value(),
            self.coords[1].value(),
            self.coords[2].value(),
        ]
    }

    /// Every point of P^2(F_p), in a fixed deterministic order: the affine
    /// chart z=1 first (x ascending then y), then the line z=0 with y=1, then
    /// [1:0:0].
    pub fn enumerate(field: PrimeField) -> impl Iterator<Item = ProjPoint> {
        let p = field.modulus();
        (0..p)
            .flat_map(move |x| {
                (0..p).map(move |y| {
                    ProjPoint::from_values(field, [x as i64, y as i64, 1]).unwrap()
                })
            })
            .chain(
                (0..p).map(move |x| ProjPoint::from_values(field, [x as i64, 1, 0]).unwrap()),
            )
            .chain(std::iter::once(
                ProjPoint::from_values(field, [1, 0, 0]).unwrap(),
            ))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.coords[0], self.coords[1], self.coords[2])
    }
}
