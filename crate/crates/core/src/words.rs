//! Words in Dehn twists over a named curve system.
//!
//! A word lists letters in the order they act: the leftmost letter is applied
//! first, so its transvection is the rightmost matrix factor of
//! [`TwistWord::homology_action`].
//!
//! In the bounded Humphries system the boundary-parallel curve `d` has class 0,
//! so `τ_d` acts trivially on homology. Homology-level checks therefore cannot
//! see the `τ_d` factors that [`TwistWord::extract_boundary_prefix`] removes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::homology::{intersection_number, transvection, HomologyClass, SurfaceSig, SympMatrix};

/// Name of the boundary-parallel curve in bounded systems.
pub const BOUNDARY_CURVE: &str = "d";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    pub name: String,
    pub class: HomologyClass,
    pub surface: SurfaceSig,
}

impl Curve {
    pub fn new(name: impl Into<String>, class: HomologyClass, surface: SurfaceSig) -> Result<Self> {
        if class.len() != surface.rank() {
            return Err(Error::Dimension { expected: surface.rank(), found: class.len() });
        }
        Ok(Curve { name: name.into(), class, surface })
    }
}

/// Named curves on a fixed surface together with the pairs known to be
/// geometrically disjoint (and hence whose twists commute).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSystem {
    surface: SurfaceSig,
    curves: Vec<Curve>,
    disjoint: BTreeSet<(String, String)>,
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

impl GeneratorSystem {
    pub fn new<I, S>(surface: SurfaceSig, curves: Vec<Curve>, disjoint_pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut names = BTreeSet::new();
        for c in &curves {
            if c.surface != surface {
                return Err(Error::InvalidSystem(format!(
                    "curve `{}` lives on {} but the system is on {}",
                    c.name, c.surface, surface
                )));
            }
            if c.name.is_empty() || c.name.contains(char::is_whitespace) || c.name.contains('^') {
                return Err(Error::InvalidSystem(format!("bad curve name `{}`", c.name)));
            }
            if !names.insert(c.name.as_str()) {
                return Err(Error::InvalidSystem(format!("duplicate curve `{}`", c.name)));
            }
        }
        let mut system = GeneratorSystem { surface, curves, disjoint: BTreeSet::new() };
        for (a, b) in disjoint_pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                return Err(Error::InvalidSystem(format!("curve `{a}` paired with itself")));
            }
            let (ca, cb) = (system.require(a)?, system.require(b)?);
            if !num_traits::Zero::is_zero(&intersection_number(&ca.class, &cb.class)?) {
                return Err(Error::InvalidSystem(format!(
                    "`{a}` and `{b}` are declared disjoint but intersect algebraically"
                )));
            }
            system.disjoint.insert(ordered(a, b));
        }
        if surface.boundary_components == 1 && system.curve(BOUNDARY_CURVE).is_some() {
            for c in &system.curves {
                if c.name != BOUNDARY_CURVE && !system.are_disjoint(BOUNDARY_CURVE, &c.name) {
                    return Err(Error::InvalidSystem(format!(
                        "boundary curve `d` must be declared disjoint from `{}`",
                        c.name
                    )));
                }
            }
        }
        Ok(system)
    }

    pub fn surface(&self) -> SurfaceSig {
        self.surface
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name)
    }

    fn require(&self, name: &str) -> Result<&Curve> {
        self.curve(name).ok_or_else(|| Error::UnresolvedCurve(name.to_owned()))
    }

    pub fn class_of(&self, name: &str) -> Result<&HomologyClass> {
        self.require(name).map(|c| &c.class)
    }

    pub fn are_disjoint(&self, a: &str, b: &str) -> bool {
        self.disjoint.contains(&ordered(a, b))
    }

    pub fn disjoint_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.disjoint.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn has_boundary_curve(&self) -> bool {
        self.surface.boundary_components == 1 && self.curve(BOUNDARY_CURVE).is_some()
    }

    /// Replace the class of an existing curve. Disjointness declarations are
    /// re-validated against the new class.
    pub fn with_class(&self, name: &str, class: HomologyClass) -> Result<Self> {
        self.require(name)?;
        let curves = self
            .curves
            .iter()
            .map(|c| if c.name == name { Curve::new(name, class.clone(), self.surface) } else { Ok(c.clone()) })
            .collect::<Result<Vec<_>>>()?;
        GeneratorSystem::new(self.surface, curves, self.disjoint.iter().cloned())
    }

    /// The sub-system on the listed curves, in the listed order.
    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let curves = names.iter().map(|n| self.require(n.as_ref()).cloned()).collect::<Result<Vec<_>>>()?;
        let keep: BTreeSet<&str> = names.iter().map(AsRef::as_ref).collect();
        let pairs =
            self.disjoint.iter().filter(|(a, b)| keep.contains(a.as_str()) && keep.contains(b.as_str())).cloned();
        GeneratorSystem::new(self.surface, curves, pairs)
    }

    /// Positive twist transvections of all curves, in system order.
    pub fn transvections(&self) -> Vec<SympMatrix> {
        self.curves.iter().map(|c| transvection(&c.class, 1)).collect()
    }
}

/// The two-curve system on the closed torus: `a = (1, 0)`, `b = (0, 1)`.
pub fn torus_system() -> GeneratorSystem {
    let s = SurfaceSig::closed(1);
    let curves = vec![
        Curve::new("a", HomologyClass::a(1, 1), s).expect("rank 2"),
        Curve::new("b", HomologyClass::b(1, 1), s).expect("rank 2"),
    ];
    GeneratorSystem::new(s, curves, Vec::<(&str, &str)>::new()).expect("torus system is valid")
}

/// Default class of `c₁`: `b₁ + b₂`.
pub fn default_c1(genus: u32) -> HomologyClass {
    HomologyClass::b(genus, 1).add(&HomologyClass::b(genus, 2)).expect("same genus")
}

/// Default class of `c₂`: `b_{g−1} + b_g`. Coincides with `c₁` in genus 2.
pub fn default_c2(genus: u32) -> HomologyClass {
    HomologyClass::b(genus, genus - 1).add(&HomologyClass::b(genus, genus)).expect("same genus")
}

/// Humphries curves `a₁…a_g, b₁…b_g, c₁, c₂`, plus `d` when `with_boundary`.
pub fn humphries_system(genus: u32, with_boundary: bool) -> Result<GeneratorSystem> {
    humphries_system_with(genus, with_boundary, None, None)
}

/// As [`humphries_system`], with explicit classes for `c₁` and `c₂`.
pub fn humphries_system_with(
    genus: u32,
    with_boundary: bool,
    c1: Option<HomologyClass>,
    c2: Option<HomologyClass>,
) -> Result<GeneratorSystem> {
    if genus < 2 {
        return Err(Error::InvalidSystem(format!(
            "Humphries system needs genus ≥ 2 (found {genus}); use the torus system for genus 1"
        )));
    }
    let s = if with_boundary { SurfaceSig::bounded(genus) } else { SurfaceSig::closed(genus) };
    let mut curves = Vec::new();
    for i in 1..=genus {
        curves.push(Curve::new(format!("a{i}"), HomologyClass::a(genus, i), s)?);
    }
    for i in 1..=genus {
        curves.push(Curve::new(format!("b{i}"), HomologyClass::b(genus, i), s)?);
    }
    curves.push(Curve::new("c1", c1.unwrap_or_else(|| default_c1(genus)), s)?);
    curves.push(Curve::new("c2", c2.unwrap_or_else(|| default_c2(genus)), s)?);
    if with_boundary {
        curves.push(Curve::new(BOUNDARY_CURVE, HomologyClass::zero(genus), s)?);
    }

    let mut pairs = Vec::new();
    for i in 1..=genus {
        for j in 1..=genus {
            if i < j {
                pairs.push((format!("a{i}"), format!("a{j}")));
                pairs.push((format!("b{i}"), format!("b{j}")));
            }
            if i != j {
                pairs.push((format!("a{i}"), format!("b{j}")));
            }
        }
    }
    if with_boundary {
        for c in &curves {
            if c.name != BOUNDARY_CURVE {
                pairs.push((BOUNDARY_CURVE.to_owned(), c.name.clone()));
            }
        }
    }
    GeneratorSystem::new(s, curves, pairs)
}

/// `τ_c` or `τ_c⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistLetter {
    curve: String,
    exponent: i8,
}

impl TwistLetter {
    pub fn new(curve: impl Into<String>, exponent: i8) -> Result<Self> {
        if exponent != 1 && exponent != -1 {
            return Err(Error::WordSyntax(format!("exponent must be ±1, got {exponent}")));
        }
        Ok(TwistLetter { curve: curve.into(), exponent })
    }

    pub fn pos(curve: impl Into<String>) -> Self {
        TwistLetter { curve: curve.into(), exponent: 1 }
    }

    pub fn neg(curve: impl Into<String>) -> Self {
        TwistLetter { curve: curve.into(), exponent: -1 }
    }

    pub fn curve(&self) -> &str {
        &self.curve
    }

    pub fn exponent(&self) -> i8 {
        self.exponent
    }

    pub fn inverse(&self) -> Self {
        TwistLetter { curve: self.curve.clone(), exponent: -self.exponent }
    }

    fn cancels(&self, other: &TwistLetter) -> bool {
        self.curve == other.curve && self.exponent == -other.exponent
    }
}

impl fmt::Display for TwistLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            f.write_str(&self.curve)
        } else {
            write!(f, "{}^-1", self.curve)
        }
    }
}

impl std::str::FromStr for TwistLetter {
    type Err = Error;

    /// `a1`, `a1^1`, `a1^+1` or `a1^-1`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, exp) = match s.split_once('^') {
            None => (s, 1),
            Some((name, "1" | "+1")) => (name, 1),
            Some((name, "-1")) => (name, -1),
            Some((_, e)) => return Err(Error::WordSyntax(format!("bad exponent `{e}` in `{s}`"))),
        };
        if name.is_empty() {
            return Err(Error::WordSyntax(format!("missing curve name in `{s}`")));
        }
        TwistLetter::new(name, exp)
    }
}

/// A product of twists over one generator system. The empty word is the identity.
#[derive(Debug, Clone)]
pub struct TwistWord {
    system: Arc<GeneratorSystem>,
    letters: Vec<TwistLetter>,
}

impl PartialEq for TwistWord {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && same_system(&self.system, &other.system)
    }
}

impl Eq for TwistWord {}

fn same_system(a: &Arc<GeneratorSystem>, b: &Arc<GeneratorSystem>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TwistWord {
    pub fn new(system: Arc<GeneratorSystem>, letters: Vec<TwistLetter>) -> Result<Self> {
        for l in &letters {
            system.require(&l.curve)?;
        }
        Ok(TwistWord { system, letters })
    }

    pub fn identity(system: Arc<GeneratorSystem>) -> Self {
        TwistWord { system, letters: Vec::new() }
    }

    /// Whitespace-separated letters, e.g. `"d a1 b1^-1"`.
    pub fn parse(system: Arc<GeneratorSystem>, text: &str) -> Result<Self> {
        let letters = text.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>()?;
        Self::new(system, letters)
    }

    /// `τ_d^k`.
    pub fn boundary_power(system: Arc<GeneratorSystem>, k: i64) -> Result<Self> {
        if !system.has_boundary_curve() {
            return Err(Error::NotBoundarySystem);
        }
        let letter = if k >= 0 { TwistLetter::pos(BOUNDARY_CURVE) } else { TwistLetter::neg(BOUNDARY_CURVE) };
        let letters = vec![letter; k.unsigned_abs() as usize];
        Ok(TwistWord { system, letters })
    }

    pub fn system(&self) -> &Arc<GeneratorSystem> {
        &self.system
    }

    pub fn letters(&self) -> &[TwistLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Cancel adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> TwistWord {
        let mut out: Vec<TwistLetter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if out.last().is_some_and(|top| top.cancels(l)) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        TwistWord { system: self.system.clone(), letters: out }
    }

    pub fn inverse(&self) -> TwistWord {
        let letters = self.letters.iter().rev().map(TwistLetter::inverse).collect();
        TwistWord { system: self.system.clone(), letters }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &TwistWord) -> Result<TwistWord> {
        if !same_system(&self.system, &other.system) {
            return Err(Error::SystemMismatch);
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Ok(TwistWord { system: self.system.clone(), letters })
    }

    /// `M_n ⋯ M_1` with `M_i` the transvection of letter `i`.
    pub fn homology_action(&self) -> SympMatrix {
        let mut m = SympMatrix::identity(self.system.surface.genus);
        for l in &self.letters {
            let class = &self.system.require(&l.curve).expect("letters resolve").class;
            m.apply_transvection_left(class.coords(), &BigInt::from(l.exponent));
        }
        m
    }

    /// Swap letters `i` and `i + 1`, whose curves must be declared disjoint.
    /// Two letters on the same curve also commute.
    pub fn commute_disjoint(&self, i: usize) -> Result<TwistWord> {
        if i + 1 >= self.letters.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.letters.len() });
        }
        let (l, r) = (&self.letters[i], &self.letters[i + 1]);
        if l.curve != r.curve && !self.system.are_disjoint(&l.curve, &r.curve) {
            return Err(Error::IllegalMove { left: l.curve.clone(), right: r.curve.clone() });
        }
        let mut letters = self.letters.clone();
        letters.swap(i, i + 1);
        Ok(TwistWord { system: self.system.clone(), letters })
    }

    /// Split `w = τ_d^k · ψ` with `ψ` free of `d`.
    ///
    /// Every `d`-letter commutes to the front because `d` is disjoint from all
    /// other curves, so `k` is the exponent sum of the `d`-letters and `ψ` is the
    /// word with them deleted.
    pub fn extract_boundary_prefix(&self) -> Result<(i64, TwistWord)> {
        if !self.system.has_boundary_curve() {
            return Err(Error::NotBoundarySystem);
        }
        let mut k = 0i64;
        let mut psi = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if l.curve == BOUNDARY_CURVE {
                k += l.exponent as i64;
            } else {
                psi.push(l.clone());
            }
        }
        Ok((k, TwistWord { system: self.system.clone(), letters: psi }))
    }

    pub fn contains_curve(&self, name: &str) -> bool {
        self.letters.iter().any(|l| l.curve == name)
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Homology action of `w`, which must be a word over `system`.
pub fn homology_action(w: &TwistWord, system: &GeneratorSystem) -> Result<SympMatrix> {
    if *w.system != *system {
        return Err(Error::SystemMismatch);
    }
    Ok(w.homology_action())
}
