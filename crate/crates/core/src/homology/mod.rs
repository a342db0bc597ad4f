//! Integer model of the first homology of a fiber surface.
//!
//! Coordinates are ordered `(a₁, b₁, …, a_g, b_g)` with `⟨aᵢ, bᵢ⟩ = 1`, so the
//! intersection form is block diagonal with blocks `[[0, 1], [-1, 0]]`.
//!
//! A positive Dehn twist about `c` acts as the transvection `x ↦ x + ⟨x, c⟩ c`.
//! This sign is fixed once here and used everywhere else; flipping it globally
//! would give an equally consistent model.

mod finite;
mod matrix;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int;

pub use finite::{sp_order, subgroup_order_mod_p, GroupOrder, ModPMatrix, DEFAULT_BFS_CAP};
pub use matrix::{is_symplectic, map_primitive_to_e1, transvection, IntMatrix, SympMatrix};

/// Topological type of a fiber: genus and number of boundary circles (0 or 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSig {
    pub genus: u32,
    #[serde(rename = "boundary")]
    pub boundary_components: u32,
}

impl SurfaceSig {
    pub fn new(genus: u32, boundary_components: u32) -> Result<Self> {
        if boundary_components > 1 {
            return Err(Error::UnsupportedBoundary(boundary_components));
        }
        Ok(SurfaceSig { genus, boundary_components })
    }

    pub fn closed(genus: u32) -> Self {
        SurfaceSig { genus, boundary_components: 0 }
    }

    pub fn bounded(genus: u32) -> Self {
        SurfaceSig { genus, boundary_components: 1 }
    }

    /// Rank of `H₁` in the absolute convention used throughout (the boundary
    /// circle is nullhomologous).
    pub fn rank(&self) -> usize {
        2 * self.genus as usize
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_components as i64
    }
}

impl fmt::Display for SurfaceSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Σ_{},{}", self.genus, self.boundary_components)
    }
}

/// A class in `H₁(Σ; Z)` as a coordinate vector of length `2g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass {
    #[serde(serialize_with = "int::serialize_ints", deserialize_with = "int::deserialize_ints")]
    coords: Vec<BigInt>,
}

impl HomologyClass {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() % 2 != 0 {
            return Err(Error::Domain(format!(
                "homology class needs an even number of coordinates, got {}",
                coords.len()
            )));
        }
        Ok(HomologyClass { coords })
    }

    pub fn from_i64s(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(genus: u32) -> Self {
        HomologyClass { coords: vec![BigInt::zero(); 2 * genus as usize] }
    }

    fn unit(genus: u32, slot: usize) -> Self {
        let mut c = Self::zero(genus);
        c.coords[slot] = BigInt::one();
        c
    }

    /// `aᵢ` for `1 ≤ i ≤ genus`.
    pub fn a(genus: u32, i: u32) -> Self {
        assert!(i >= 1 && i <= genus, "a_{i} out of range for genus {genus}");
        Self::unit(genus, 2 * (i as usize - 1))
    }

    /// `bᵢ` for `1 ≤ i ≤ genus`.
    pub fn b(genus: u32, i: u32) -> Self {
        assert!(i >= 1 && i <= genus, "b_{i} out of range for genus {genus}");
        Self::unit(genus, 2 * (i as usize - 1) + 1)
    }

    pub fn genus(&self) -> u32 {
        (self.coords.len() / 2) as u32
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Greatest common divisor of the coordinates (0 for the zero class).
    pub fn content(&self) -> BigInt {
        self.coords.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn add(&self, other: &HomologyClass) -> Result<HomologyClass> {
        check_same_len(self, other)?;
        Ok(HomologyClass { coords: self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect() })
    }

    pub fn scale(&self, k: &BigInt) -> HomologyClass {
        HomologyClass { coords: self.coords.iter().map(|x| x * k).collect() }
    }

    pub fn neg(&self) -> HomologyClass {
        HomologyClass { coords: self.coords.iter().map(|x| -x).collect() }
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

fn check_same_len(x: &HomologyClass, y: &HomologyClass) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), found: y.len() });
    }
    Ok(())
}

/// Algebraic intersection `⟨x, y⟩ = Σᵢ (x_{aᵢ} y_{bᵢ} − x_{bᵢ} y_{aᵢ})`.
pub fn intersection_number(x: &HomologyClass, y: &HomologyClass) -> Result<BigInt> {
    check_same_len(x, y)?;
    Ok(pairing(&x.coords, &y.coords))
}

pub(crate) fn pairing(x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (xp, yp) in x.chunks_exact(2).zip(y.chunks_exact(2)) {
        acc += &xp[0] * &yp[1];
        acc -= &xp[1] * &yp[0];
    }
    acc
}

/// True iff the coordinates have gcd 1. The zero class is not primitive.
pub fn is_primitive(x: &HomologyClass) -> bool {
    x.content().abs().is_one()
}
