//! Lefschetz fibrations as ordered lists of vanishing cycles.
//!
//! The cycle order is the counterclockwise order of the critical values around
//! a base point; each cycle contributes one positive Dehn twist to the monodromy.
//! Critical values themselves are not modeled.
//!
//! Hurwitz moves act on homology classes only. A moved cycle gets a generated
//! name and no longer carries the disjointness data of its source system.

use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{is_primitive, transvection, HomologyClass, SurfaceSig, SympMatrix};
use crate::words::Curve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Disk,
    Sphere,
}

impl Base {
    pub fn euler_characteristic(self) -> i64 {
        match self {
            Base::Disk => 1,
            Base::Sphere => 2,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Disk => "disk",
            Base::Sphere => "sphere",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzData {
    base: Base,
    fiber: SurfaceSig,
    cycles: Vec<Curve>,
    label: String,
}

impl LefschetzData {
    pub fn new(base: Base, fiber: SurfaceSig, cycles: Vec<Curve>, label: impl Into<String>) -> Result<Self> {
        if base == Base::Sphere && fiber.boundary_components != 0 {
            return Err(Error::InvalidFibration("a fibration over the sphere has closed fibers".into()));
        }
        if base == Base::Sphere && cycles.is_empty() {
            return Err(Error::InvalidFibration("a fibration over the sphere needs vanishing cycles".into()));
        }
        for (i, c) in cycles.iter().enumerate() {
            if c.surface != fiber || c.class.len() != fiber.rank() {
                return Err(Error::InvalidFibration(format!(
                    "cycle {i} (`{}`) does not live on the fiber {fiber}",
                    c.name
                )));
            }
        }
        Ok(LefschetzData { base, fiber, cycles, label: label.into() })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn fiber(&self) -> SurfaceSig {
        self.fiber
    }

    pub fn cycles(&self) -> &[Curve] {
        &self.cycles
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Product of the positive twists, first cycle acting first.
    pub fn total_monodromy(&self) -> SympMatrix {
        let mut m = SympMatrix::identity(self.fiber.genus);
        for c in &self.cycles {
            m.apply_transvection_left(c.class.coords(), &num_bigint::BigInt::one());
        }
        m
    }

    /// `χ(F)·χ(base) + n`: `2χ(F) + n` over the sphere, `χ(F) + n` over the disk.
    pub fn euler_characteristic(&self) -> i64 {
        self.fiber.euler_characteristic() * self.base.euler_characteristic() + self.cycles.len() as i64
    }

    pub fn validate(&self) -> ValidationReport {
        let failures: Vec<CycleFailure> = self
            .cycles
            .iter()
            .enumerate()
            .filter_map(|(index, c)| {
                if c.class.is_zero() {
                    Some(CycleFailure { index, name: c.name.clone(), reason: FailureReason::Inessential })
                } else if !is_primitive(&c.class) {
                    let divisor = c.class.content().abs().to_string();
                    Some(CycleFailure { index, name: c.name.clone(), reason: FailureReason::NonPrimitive { divisor } })
                } else {
                    None
                }
            })
            .collect();
        let closure = match self.base {
            Base::Disk => Closure::NotApplicable,
            Base::Sphere => {
                let m = self.total_monodromy();
                if m.is_identity() {
                    Closure::Identity
                } else {
                    Closure::Defect(m)
                }
            }
        };
        let gompf_necessary =
            if self.fiber.genus >= 1 && failures.is_empty() { GompfVerdict::Satisfied } else { GompfVerdict::Unknown };
        ValidationReport { simplified: failures.is_empty(), failures, closure, gompf_necessary }
    }

    /// Elementary Hurwitz move at positions `(i, i + 1)`; the total monodromy
    /// is unchanged.
    ///
    /// * left:  `(cᵢ, cᵢ₊₁) ↦ (cᵢ₊₁, τ_{cᵢ₊₁}(cᵢ))`
    /// * right: `(cᵢ, cᵢ₊₁) ↦ (τ_{cᵢ}⁻¹(cᵢ₊₁), cᵢ)`
    ///
    /// Right at `i` undoes left at `i` and vice versa.
    pub fn hurwitz_move(&self, i: usize, dir: Direction) -> Result<LefschetzData> {
        let n = self.cycles.len();
        if n < 2 || i > n - 2 {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let (x, y) = (&self.cycles[i], &self.cycles[i + 1]);
        let (first, second) = match dir {
            Direction::Left => {
                let moved = transvection(&y.class, 1).apply(&x.class)?;
                (y.clone(), moved_curve(x, y, 1, moved))
            }
            Direction::Right => {
                let moved = transvection(&x.class, -1).apply(&y.class)?;
                (moved_curve(y, x, -1, moved), x.clone())
            }
        };
        let mut cycles = self.cycles.clone();
        cycles[i] = first;
        cycles[i + 1] = second;
        Ok(LefschetzData { cycles, ..self.clone() })
    }
}

/// `t[by](name)` for `τ_by(name)` and `t-[by](name)` for `τ_by⁻¹(name)`;
/// applying the inverse twist to such a name unwraps it.
fn moved_curve(curve: &Curve, by: &Curve, sign: i32, class: HomologyClass) -> Curve {
    let (tag, inverse_tag) = if sign > 0 { ("t", "t-") } else { ("t-", "t") };
    let prefix = format!("{inverse_tag}[{}](", by.name);
    let name = match curve.name.strip_prefix(&prefix).and_then(|r| r.strip_suffix(')')) {
        Some(inner) => inner.to_owned(),
        None => format!("{tag}[{}]({})", by.name, curve.name),
    };
    Curve { name, class, surface: curve.surface }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Direction::Left),
            "right" => Ok(Direction::Right),
            _ => Err(Error::Domain(format!("direction must be `left` or `right`, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FailureReason {
    /// Nullhomologous cycle.
    Inessential,
    /// Nonzero class divisible by `divisor > 1`; no simple closed curve has it.
    NonPrimitive { divisor: String },
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::Inessential => f.write_str("inessential"),
            FailureReason::NonPrimitive { divisor } => write!(f, "non-primitive (divisible by {divisor})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleFailure {
    pub index: usize,
    pub name: String,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    /// Disk base: the monodromy around the boundary need not be trivial.
    NotApplicable,
    Identity,
    Defect(SympMatrix),
}

/// Necessary-condition heuristic for the fiber class to be nonzero in `H²`.
/// The class itself is not computable from factorization data here, so this
/// never reports "violated".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GompfVerdict {
    Satisfied,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub simplified: bool,
    pub failures: Vec<CycleFailure>,
    pub closure: Closure,
    pub gompf_necessary: GompfVerdict,
}

impl ValidationReport {
    /// Simplified, and closed up when the base is the sphere.
    pub fn accepted(&self) -> bool {
        self.simplified && !matches!(self.closure, Closure::Defect(_))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "simplified: {}", self.simplified)?;
        for fail in &self.failures {
            writeln!(f, "  cycle {} (`{}`): {}", fail.index, fail.name, fail.reason)?;
        }
        match &self.closure {
            Closure::NotApplicable => writeln!(f, "closure: not-applicable (disk base)")?,
            Closure::Identity => writeln!(f, "closure: identity")?,
            Closure::Defect(m) => writeln!(f, "closure: defect {m}")?,
        }
        let verdict = match self.gompf_necessary {
            GompfVerdict::Satisfied => "satisfied",
            GompfVerdict::Unknown => "unknown",
        };
        writeln!(f, "gompf-necessary (heuristic): {verdict}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::torus_system;

    fn torus_curves(pattern: &str) -> Vec<Curve> {
        let t = torus_system();
        pattern.split_whitespace().map(|n| t.curve(n).unwrap().clone()).collect()
    }

    fn torus_fibration(pattern: &str, base: Base) -> LefschetzData {
        LefschetzData::new(base, SurfaceSig::closed(1), torus_curves(pattern), "t").unwrap()
    }

    fn curve(name: &str, v: &[i64], s: SurfaceSig) -> Curve {
        Curve::new(name, HomologyClass::from_i64s(v).unwrap(), s).unwrap()
    }

    #[test]
    fn torus_relation_closes() {
        let lf = torus_fibration(&"a b ".repeat(6), Base::Sphere);
        let r = lf.validate();
        assert!(r.simplified && r.accepted());
        assert_eq!(r.closure, Closure::Identity);
        assert_eq!(r.gompf_necessary, GompfVerdict::Satisfied);
        assert_eq!(lf.euler_characteristic(), 12);
    }

    #[test]
    fn two_cycle_monodromy() {
        let lf = torus_fibration("a b", Base::Disk);
        let m = lf.total_monodromy();
        assert_eq!(m.as_int(), &crate::homology::IntMatrix::from_i64_rows(&[&[1, -1], &[1, 0]]).unwrap());
        assert!(m.pow(6).is_identity());
        assert_eq!(lf.validate().closure, Closure::NotApplicable);
    }

    #[test]
    fn zero_class_is_inessential() {
        let s = SurfaceSig::closed(1);
        let lf = LefschetzData::new(Base::Sphere, s, vec![curve("z", &[0, 0], s), curve("w", &[2, 4], s)], "").unwrap();
        let r = lf.validate();
        assert!(!r.simplified);
        assert_eq!(r.failures[0].reason, FailureReason::Inessential);
        assert_eq!(r.failures[1].reason, FailureReason::NonPrimitive { divisor: "2".into() });
        assert_eq!(r.gompf_necessary, GompfVerdict::Unknown);
        assert!(r.to_string().contains("inessential"));
    }

    #[test]
    fn euler_characteristic_examples() {
        let empty = LefschetzData::new(Base::Disk, SurfaceSig::bounded(3), vec![], "").unwrap();
        assert_eq!(empty.euler_characteristic(), -5);
        assert!(empty.total_monodromy().is_identity());
    }

    #[test]
    fn construction_invariants() {
        let s = SurfaceSig::bounded(1);
        assert!(LefschetzData::new(Base::Sphere, s, vec![curve("a", &[1, 0], s)], "").is_err());
        assert!(LefschetzData::new(Base::Sphere, SurfaceSig::closed(1), vec![], "").is_err());
        let wrong = curve("a", &[1, 0, 0, 0], SurfaceSig::closed(2));
        assert!(LefschetzData::new(Base::Disk, SurfaceSig::closed(1), vec![wrong], "").is_err());
    }

    #[test]
    fn left_move_on_torus() {
        let lf = torus_fibration("a b", Base::Disk);
        let moved = lf.hurwitz_move(0, Direction::Left).unwrap();
        assert_eq!(moved.cycles()[0].name, "b");
        assert_eq!(moved.cycles()[1].name, "t[b](a)");
        // τ_b(a) = a + ⟨a, b⟩ b = a + b
        assert_eq!(moved.cycles()[1].class, HomologyClass::from_i64s(&[1, 1]).unwrap());
        assert_eq!(moved.total_monodromy(), lf.total_monodromy());
        let back = moved.hurwitz_move(0, Direction::Right).unwrap();
        assert_eq!(back, lf);
    }

    #[test]
    fn disjoint_pair_moves_by_plain_swap() {
        let s = SurfaceSig::closed(2);
        let lf =
            LefschetzData::new(Base::Disk, s, vec![curve("a1", &[1, 0, 0, 0], s), curve("a2", &[0, 0, 1, 0], s)], "")
                .unwrap();
        let moved = lf.hurwitz_move(0, Direction::Left).unwrap();
        let classes: Vec<_> = moved.cycles().iter().map(|c| c.class.clone()).collect();
        assert_eq!(classes, [lf.cycles()[1].class.clone(), lf.cycles()[0].class.clone()]);
    }

    #[test]
    fn move_index_out_of_range() {
        let lf = torus_fibration("a b", Base::Disk);
        assert_eq!(lf.hurwitz_move(1, Direction::Left).unwrap_err(), Error::IndexOutOfRange { index: 1, len: 2 });
        let single = torus_fibration("a", Base::Disk);
        assert!(single.hurwitz_move(0, Direction::Right).is_err());
    }
}
